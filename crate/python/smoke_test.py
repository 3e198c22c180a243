"""Smoke test for the semimatch_py extension module.

Build and run from the repository root:

    cargo build -p semimatch-py --release --features extension-module
    cp target/release/libsemimatch_py.so python/semimatch_py.so
    python3 python/smoke_test.py
"""

import semimatch_py as sm


def check_b7():
    b7 = sm.Band.b7()
    s = b7.semigroup()
    assert s.order == 7
    assert s.structure()["orthodox"]
    assert sm.find_permutation_matching(s) is None
    subset, image = sm.hall_violator(s)
    assert len(subset) == 2 and len(image) == 1
    assert sm.equivalence_verdicts(s) == [False] * 6
    print("B7: no matching, violator", [s.label(a) for a in subset], "->", [s.label(a) for a in image])


def check_full_band():
    band = sm.Band(["1111", "1111"])
    assert band.row_column_condition()
    assert band.harem_functions() == [[0, 1], [2, 3]]
    inv = band.harem_involution()
    s = band.semigroup()
    assert sm.verify_involution_matching(s, inv)
    assert sm.find_involution_matching(s) is not None
    via_colours = sm.colour_reduce(band, sm.find_permutation_matching(s))
    assert via_colours is not None and sm.verify_involution_matching(s, via_colours)
    print("2x4 band: harem involution", inv)


def check_transformations():
    t3, images = sm.enumerate_family("Tn", 3)
    assert t3.order == 27 and len(images) == 27
    assert sorted(len(d) for d in t3.d_classes()) == [3, 6, 18]
    phi = sm.full_transformation_matching(3)
    assert sm.verify_permutation_matching(t3, phi)
    pt2, images = sm.enumerate_family("PTn", 2)
    assert pt2.order == 9 and [None, None] in images
    on, _ = sm.enumerate_family("On", 4)
    assert on.order == 35 and on.is_regular()
    print("T_3 matching via Q-classes verified")


def check_colour():
    out = sm.colour_solve(2, 2, [(0, 0), (0, 0), (1, 1), (1, 1)])
    assert out["status"] == "solved", out
    out = sm.colour_solve(2, 2, [(0, 0), (0, 0), (1, 1), (1, 1)], budget=1)
    assert out["status"] == "budget_exhausted", out
    print("colour solver:", out["status"], "at budget 1")


def check_table_round_trip():
    chain = sm.Semigroup([[0, 0, 0], [0, 1, 1], [0, 1, 2]])
    assert chain.structure()["inverse"]
    assert sm.find_permutation_matching(chain) == [0, 1, 2]
    again = sm.Semigroup.from_text(chain.to_text())
    assert again.mul(1, 2) == 1
    try:
        sm.Semigroup([[1, 0], [0, 0]])
    except ValueError:
        pass
    else:
        raise AssertionError("non-associative table accepted")


if __name__ == "__main__":
    check_b7()
    check_full_band()
    check_transformations()
    check_colour()
    check_table_round_trip()
    print("smoke test passed")
