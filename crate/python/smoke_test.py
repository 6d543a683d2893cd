"""Smoke test for the `lbc` extension module.

Build and copy the module next to this file first:

    PYO3_BUILD_EXTENSION_MODULE=1 cargo build --release -p lbc-python --features extension-module
    cp target/release/liblbc.so python/lbc.so
"""

import itertools
import math

import lbc


def main():
    r = lbc.m_star(1, 2, 7)
    assert (r.m_star, r.k, r.optimal) == (3, 4, True), r
    assert r.witness.dim == 4 and r.witness.min_nonzero_weight() == 3
    assert r.witness.avoids(lbc.WeightSet.interval(1, 2, 7))

    assert lbc.m_star(2, 2, 8, workers=4).m_star == 3
    assert lbc.m_star(3, 3, 4).m_star == 1

    f = lbc.WeightSet.parse("1..2", 7)
    assert f.weights() == [1, 2] and 2 in f and len(f) == 2
    g = lbc.greedy_avoiding(f)
    assert g.avoids(f) and g.dim >= 7 - int(math.log2(28)) - 1

    s = lbc.Subspace(5, ["11000", "00110", "11110"])
    assert s.dim == 2 and "11110" in s and "10000" not in s

    c = lbc.Classifier(lbc.WeightSet.parse("0..2", 9), lbc.WeightSet.parse("n-2..n", 9))
    assert c.rank == 5 and c.validate()
    for bits in itertools.product("01", repeat=9):
        x = "".join(bits)
        w = x.count("1")
        if w <= 2:
            assert c.classify(x) == "class1", x
        elif w >= 7:
            assert c.classify(x) == "class2", x

    parts = lbc.counterexample(12, 2, 5, 7)
    assert parts["implied_upper_bound"] == 1 + lbc.m_star(1, 6, 6).m_star  # weights above 6 do not exist at n = 6
    assert parts["combined"].avoids(lbc.WeightSet.interval(5, 7, 12))

    assert lbc.entropy(0.25) < 7 / 8
    assert lbc.conjecture_rate(0.0, 0.3) == lbc.entropy(0.3)
    assert lbc.distinguishing_bounds(f) == (3, 5)

    try:
        lbc.m_star(1, 9, 8)
    except ValueError:
        pass
    else:
        raise AssertionError("b > n accepted")

    print("python smoke test ok")


if __name__ == "__main__":
    main()
