"""Smoke test for the pyinvbar extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/pyinvbar-*.whl
"""

from fractions import Fraction
from itertools import product
from math import factorial

import pyinvbar


def brute_area_sper(n):
    rows = [{} for _ in range(n)]
    for seq in product(*[range(1, i + 2) for i in range(n)]):
        area = sum(seq)
        vertical = seq[0] + seq[-1] + sum(abs(a - b) for a, b in zip(seq, seq[1:]))
        key = (area, n + vertical // 2)
        row = rows[seq[-1] - 1]
        row[key] = row.get(key, 0) + 1
    return rows


def main():
    assert pyinvbar.stats([1, 2, 1, 3, 5, 3])["area"] == 15
    assert pyinvbar.stats([1, 2, 1, 3, 5, 3])["sper"] == 12
    try:
        pyinvbar.validate([1, 3])
    except ValueError:
        pass
    else:
        raise AssertionError("validate accepted 1,3")

    assert len(pyinvbar.enumerate(5)) == factorial(5)

    table = pyinvbar.dist("area-sper", 5)
    assert table.n == 5
    assert str(table.get(1, 1)) == "p*q^2"
    for i, want in enumerate(brute_area_sper(5), start=1):
        got = {(e[1], e[2]): c for c, e in table.get(5, i).terms()}
        assert got == want, (i, got, want)
    assert pyinvbar.dist("lda", 6, engine="brute") == pyinvbar.dist("lda", 6, engine="threeterm")
    again = pyinvbar.DistTable.from_json(table.to_json())
    assert again == table

    p = pyinvbar.Poly("y+2*p*q^-1")
    assert p * pyinvbar.Poly("1") == p
    assert p.eval({"y": Fraction(1, 2), "p": 3, "q": "2"}) == Fraction(7, 2)
    assert str(p.substitute("q", pyinvbar.Poly.var("p"))) == "2+y"

    totals = pyinvbar.totals(4)
    assert totals["area"] == 168 and totals["levels"] == 26

    assert pyinvbar.apply_map("f", "1,2,2,4,3,3,7,7") == "(1,2)(3,5,4)(6,7)(8)"
    assert pyinvbar.apply_map("g", "1,2,1,4,2,4,7,3") == "4,6,1,7,2,5,8,3"
    assert pyinvbar.apply_map("levels-involution", "1,2,1") is None

    coeffs = pyinvbar.series("area-gf", order=3, y=Fraction(1, 2))
    assert coeffs[3] * 6 == Fraction(57, 8)

    report = pyinvbar.run_verify("all", nmax=5, order=6)
    assert report and all(r["status"] == "pass" for r in report)
    bad = pyinvbar.run_verify("recurrences", nmax=4, order=4, corrupt=True)
    assert any(r["status"] == "fail" for r in bad)

    print("pyinvbar smoke test passed")


if __name__ == "__main__":
    main()
