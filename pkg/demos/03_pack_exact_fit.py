"""Packing an exact-fit container.

A 458 x 483 x 610 mm cuboid admits the 610 x 483 x 229 mm catalog box in
exactly one orientation (long side up), and two of them side by side with
zero slack in two axes.  Exact-fit cases are the acid test for the geometry:
the feasible region is a lower-dimensional slab that float-based erosion
would lose entirely.  This demo computes feasible regions for all distinct
orientations, runs the exhaustive search, and validates the resulting
packing independently.

Run:  python3 demos/03_pack_exact_fit.py
"""

from trunkpack.catalog import FULL_CATALOG, distinct_orientations
from trunkpack.freespace import compute_feasible_region, parse_convex_json
from trunkpack.search import enumerate_patterns, validate_packing


def build_trunk():
    return parse_convex_json({"shell": {"halfspaces": [
        {"n": [-1, 0, 0], "d": 0}, {"n": [1, 0, 0], "d": 458},
        {"n": [0, -1, 0], "d": 0}, {"n": [0, 1, 0], "d": 483},
        {"n": [0, 0, -1], "d": 0}, {"n": [0, 0, 1], "d": 610},
    ]}})


def main():
    trunk = build_trunk()
    box = next(b for b in FULL_CATALOG if b.id == "A")
    print(f"container: 458 x 483 x 610 mm")
    print(f"box type {box.id}: {box.dims_mm} mm, up to {box.max_count} per "
          f"packing\n")

    regions = {}
    for orientation in distinct_orientations(box):
        region = compute_feasible_region(trunk, box, orientation,
                                         samples=20000, seed=99)
        status = "empty"
        if region is not None:
            regions[(box.id, orientation)] = region
            status = (f"{len(region.hull.halfspaces)} facets"
                      + (", exact-fit slab" if region.fattened else ""))
        print(f"  orientation {orientation}: {status}")

    result = enumerate_patterns(regions, [box])
    print(f"\nbest packing: {len(result.placements)} boxes, "
          f"{result.volume_dm3():.2f} dm3")
    for p in result.placements:
        center = ", ".join(f"{v:.1f}" for v in p.center_mm)
        print(f"  {p.box.id} {p.orientation} centered at ({center}) mm")
    print(f"search: {result.stats.nodes} nodes, {result.stats.lp_calls} LP "
          f"calls, {result.stats.wall_time_s:.2f} s")

    verdict = validate_packing(result.placements, regions)
    print(f"independent validation: valid={verdict['valid']} "
          f"(mode {verdict['mode']})")


if __name__ == "__main__":
    main()
