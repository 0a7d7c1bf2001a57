"""Smoke test for the ndg_py extension.

Build and run:

    cargo build -p ndg-python --features extension-module --release
    cp target/release/libndg_py.so python/ndg_py.so   # .dylib on macOS
    python3 python/smoke.py

or `maturin develop -m crates/python/Cargo.toml --features extension-module`.
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import ndg_py

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "crates", "cli", "tests", "fixtures")


def main():
    f = ndg_py.Field.prime(7, 3)
    assert f.order == 3 and f.q == "2"
    # [3 1] vanishes at a primitive cube root.
    assert f.q_binomial(3, 1) == "0"
    assert f.q_binomial(2, 1) == "3"

    block = ndg_py.Complex.block(f, 0, 3)
    assert block.is_acyclic()
    assert block.contract() == [0]

    k = ndg_py.Complex(f, {0: 1})
    assert [k.homology(0, r) for r in (1, 2)] == [1, 1]
    assert k.khom(k) == 1
    assert k.khom(block) == 0
    assert k.suspend() == k.theta(3).desuspend()

    short = ndg_py.Complex(f, {0: 1, 1: 1}, {0: [[1]]})
    assert (short.homology(0, 1), short.homology(0, 2), short.homology(1, 1)) == (0, 1, 1)
    assert short.hom(short).dims() == {-1: 1, 0: 2, 1: 1}

    try:
        ndg_py.Complex(f, {0: 1, 1: 1, 2: 1, 3: 1}, {0: [[1]], 1: [[1]], 2: [[1]]})
    except ValueError as e:
        assert "nonzero" in str(e)
    else:
        raise AssertionError("d^3 != 0 accepted")

    ws = ndg_py.Workspace.load(os.path.join(FIXTURES, "basic.json"))
    assert "Block" in ws.complexes()
    p = ws.module("P")
    assert p.khom(p) == 1
    assert sum(p.hom_dims(p).values()) == 4
    again = ndg_py.Workspace.from_json(ws.to_json())
    assert again.to_json() == ws.to_json()

    c = ndg_py.Field.cyclotomic(4)
    assert c.q == "[0,1]"

    passed, checks = ndg_py.run_suite("category", orders=[3], trials=3, seed=1)
    assert passed, checks
    assert "q-identities" in ndg_py.suites()
    print("ndg_py smoke test passed:", len(checks), "category checks")


if __name__ == "__main__":
    main()
