namespace operad::detail { int stub_b = 0; }
