namespace operad::detail { int stub_a = 0; }
