"""Metric completeness evidence and where the Hopf-Rinow dichotomy applies.

Locally finite graphs with an intrinsic path metric satisfy a Hopf-Rinow
type theorem: completeness, ball compactness (= finiteness here) and
geodesic completeness line up.  The report gathers finite evidence:
stabilized ball sizes across growing windows and the total length of each
end.  A finite end length is decisive incompleteness evidence; the stars
of the appendix are not locally finite, and the report says the dichotomy
is inapplicable instead of pretending.
"""

from iglab.completeness import boundary_distances, boundary_model, hopf_rinow_report
from iglab.gallery import build_family


def main():
    for name in ("ex5.1", "ex5.2", "ex5.3a", "ex5.4", "a5.1"):
        fam = build_family(name)
        rep = hopf_rinow_report(fam, "sigma0" if name == "a5.1"
                                else "canonical", n_max=256)
        print(f"{name:7s} verdict: {rep.verdict}")
        for el in rep.to_dict()["end_lengths"]:
            print(f"         end {el['end']!r}: length {el['length']:.6f} "
                  f"(+ tail bound {el['bound']:.2e}), "
                  f"finite = {el['finite']}")
        if not rep.end_lengths:
            print("         (no linear ends)")
    print()

    # ex5.4's boundary point sits at distance r(x) = 2^(1-x) from vertex x
    fam = build_family("ex5.4")
    bm = boundary_model(fam)
    (end,) = bm.boundary_ends()
    bd = boundary_distances(bm, end.label, depth=31)
    print("ex5.4 distances to the boundary point "
          f"(exact arithmetic: {bd.exact}):")
    for x in (1, 5, 10, 20, 30):
        print(f"  r({x:2d}) = {bd.r(x):.10g}  (= 2^{1 - x})")


if __name__ == "__main__":
    main()
