#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace operad {

// Exact rational scalar. GMP keeps values canonical (reduced, positive
// denominator), which is exactly the invariant the rest of the code relies on.
using Rational = mpq_class;

inline std::string rational_to_string(const Rational& q) {
    return q.get_str();  // "p" when the denominator is 1, else "p/q"
}

inline Rational rational_from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

// mpq_class(p, q) does not reduce; this does.
inline Rational make_rational(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

// Combined bit size of numerator and denominator; used by pivot selection.
inline std::size_t rational_bits(const Rational& q) {
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

}  // namespace operad
