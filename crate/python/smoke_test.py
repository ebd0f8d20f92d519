"""Smoke test for the bellforge Python module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`
or `pip install crates/python`.
"""

import math

import bellforge


def main():
    i10 = bellforge.Inequality.builtin("I10")
    assert i10.settings == [2, 2, 2]
    assert i10.local_bounds() == ("0", "8")
    assert i10.evaluate([[1, 1], [1, 1], [1, 1]]) == "0"

    h = bellforge.homogenize(i10)
    assert h.name == "H10"
    assert h.is_homogeneous()
    assert (h.lower, h.upper) == ("-4", "4")
    assert bellforge.equivalent(h, bellforge.Inequality.builtin("H10"))

    back = bellforge.dehomogenize(h, [1, 1, 1])
    assert len(back.terms) == 16

    report = bellforge.is_tight(h, "upper")
    assert report["is_tight"] and report["saturating_count"] == 64

    assert bellforge.vertex_count([2, 2], "all") == 16
    assert bellforge.vertex_count([2, 2]) == 8

    chsh = bellforge.Inequality(
        "chsh", [2, 2], [([1, 1], "1"), ([1, 2], "1"), ([2, 1], "1"), ([2, 2], "-1")], "-2", "2"
    )
    result = bellforge.seesaw(chsh, restarts=4)
    assert abs(abs(result["quantum_value"]) - 2 * math.sqrt(2)) < 1e-6

    ghz = [1 / math.sqrt(2), 0.0, 0.0, 0.0, 1 / math.sqrt(2)]
    assert abs(bellforge.zb_condition(ghz, optimize=False) - 1.0) < 1e-12
    assert bellforge.zb_condition(ghz) <= 1 + 1e-6

    try:
        bellforge.Inequality.builtin("nope")
    except ValueError as e:
        assert "unknown_inequality" in str(e)
    else:
        raise AssertionError("expected ValueError")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
