namespace operad::detail { int stub_r = 0; }
