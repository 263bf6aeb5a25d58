"""Quick check that the extension imports and computes.

Build and install first, for example with `maturin develop` inside
crates/py, then run `python python/smoke_test.py`.
"""

import hopf_comod as hc


def main():
    ids = [i for i, _ in hc.fixtures()]
    assert ids == ["F1", "F2", "F3"], ids

    f1 = hc.Definition.fixture("F1")
    assert all(w is None for _, w in f1.check_algebroid())
    trivial = f1.comodule("trivial")
    assert trivial.ext_dims(4) == [1, 1, 1, 1, 1]
    regular = f1.comodule("regular")
    assert regular.tensor(regular).kdim() == 4
    assert regular.chom(trivial).check()

    f3 = hc.Definition.fixture("F3")
    n = f3.comodule("A_mod_x2")
    assert f3.unit().chom(n).kdim() == 2
    assert n.invariants_dim() == 1
    try:
        f3.unit().ext_dims(2)
    except hc.CapabilityError:
        pass
    else:
        raise AssertionError("expected a capability refusal")

    # a computed comodule can be written out and loaded again
    text = hc.fixture_text("F1") + "\n" + regular.tensor(regular).to_text("rr")
    again = hc.Definition.load(text)
    assert again.comodule("rr").check()

    try:
        hc.Definition.load("[field]\ncharacteristic = 2\n")
    except hc.ParseError:
        pass
    else:
        raise AssertionError("expected a parse error")

    code, out = hc.run_cli(["cobar-ext", "--fixture", "F1", "--input", "M=trivial", "--depth", "2"])
    assert code == 0 and "ext_dims: [1,1,1]" in out, out
    print("smoke test passed")


if __name__ == "__main__":
    main()
