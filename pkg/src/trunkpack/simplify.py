"""Obstacle-description simplification.

Feasible regions carry one convex obstacle per trunk concavity; realistic
trunks produce hundreds of small obstacles with many facets each, and the
packing search branches on every obstacle facet.  This module shrinks the
description while only ever *growing* the forbidden set (so any packing
found afterwards is still valid in the original region):

* ``merge_obstacles`` replaces touching obstacle pairs by their convex hull
  when the hull's volume overshoot stays under an absolute (mm^3) or
  relative (percent) budget and the facet count strictly decreases.
* ``drop_facets`` removes individual obstacle facets when the forbidden set
  inside the trunk hull grows by at most a given distance (mm), measured as
  the optimum of a small LP and confirmed in exact arithmetic.

All growth decisions are taken in exact rational arithmetic; floating point
appears only in the drop-facet LP used as a fast filter, and an LP failure
always retains the facet.  Every accepted merge and drop is logged with the
exact quantities so the bounds can be re-verified independently.
"""

from __future__ import annotations

import dataclasses
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from trunkpack.freespace import enlarged_hull, sample_lattice_points, classify_feasible
from trunkpack.geometry import (ConvexPolytope, Halfspace, convex_hull,
                                cross3, intersect_halfspaces, to_fraction,
                                _polytope_from_rows)
from trunkpack.lp import NumericalFailure, maximize_direction

DEFAULT_REL_PCT = 10.0
DEFAULT_ABS_MM3 = 10000.0
DEFAULT_DROP_MM = 1.0
_LP_FILTER_SLOP = 1e-6


@dataclass(frozen=True)
class MergeParams:
    """Budgets for pairwise obstacle merging.

    ``rel_bound_pct``: merge allowed when hull volume exceeds the union
    bookkeeping volume by at most this percentage of it.
    ``abs_bound_mm3``: ... or by at most this many cubic millimetres.
    ``rng_seed`` drives the pair-visit order (merging is order dependent;
    the seed makes runs reproducible).
    """

    rel_bound_pct: float = DEFAULT_REL_PCT
    abs_bound_mm3: float = DEFAULT_ABS_MM3
    rng_seed: int = 0

    def __post_init__(self):
        if to_fraction(self.rel_bound_pct) < 0 or to_fraction(self.abs_bound_mm3) < 0:
            raise ValueError("merge bounds must be non-negative")


@dataclass
class MergedObstacle:
    """Bookkeeping for an obstacle built out of original obstacles."""

    polytope: ConvexPolytope
    base_volume_mm3: Fraction
    member_ids: Tuple[str, ...]
    base_approximate: bool = False


def _pairwise_intersection_volume(a: ConvexPolytope, b: ConvexPolytope) -> Fraction:
    inter = _polytope_from_rows(list(a.halfspaces) + list(b.halfspaces))
    if inter is None or inter.degenerate:
        return Fraction(0)
    return inter.volume()


def merge_obstacles(region, params: MergeParams):
    """Greedy randomized merging of touching obstacle pairs.

    Returns ``(region_with_merged_obstacles, log_entries)``.  Sweeps visit
    all currently-touching pairs in seeded random order, merging any pair
    whose hull passes both the volume-growth budget and a strict facet-count
    decrease; sweeps repeat until none merges.  Only geometrically touching
    pairs are ever considered.  The union volume of chains that overlapped
    before merging is tracked approximately (inclusion-exclusion on the
    recorded pair only) and flagged ``base_approximate``.
    """
    from trunkpack.geometry import polytopes_touch

    rel = to_fraction(params.rel_bound_pct)
    abs_bound = to_fraction(params.abs_bound_mm3)
    rng = random.Random(params.rng_seed)
    state = [MergedObstacle(o, o.volume(), (o.id or f"o{i}",))
             for i, o in enumerate(region.obstacles)]
    log: List[dict] = []
    next_id = 0
    while True:
        pairs = [(i, j)
                 for i in range(len(state))
                 for j in range(i + 1, len(state))
                 if polytopes_touch(state[i].polytope, state[j].polytope)]
        rng.shuffle(pairs)
        consumed = set()
        fresh: List[MergedObstacle] = []
        for (i, j) in pairs:
            if i in consumed or j in consumed:
                continue
            first, second = state[i], state[j]
            hull = convex_hull(
                list(first.polytope.vertices) + list(second.polytope.vertices),
                id=f"m{next_id}")
            if len(hull.halfspaces) >= (len(first.polytope.halfspaces)
                                        + len(second.polytope.halfspaces)):
                continue
            overlap = _pairwise_intersection_volume(first.polytope, second.polytope)
            base = first.base_volume_mm3 + second.base_volume_mm3 - overlap
            growth = hull.volume() - base
            if not (growth <= abs_bound or growth * 100 <= rel * base):
                continue
            approximate = (first.base_approximate or second.base_approximate
                           or (overlap > 0 and (len(first.member_ids) > 1
                                                or len(second.member_ids) > 1)))
            members = tuple(sorted(first.member_ids + second.member_ids))
            log.append({
                "id": hull.id,
                "merged": sorted([first.polytope.id or first.member_ids[0],
                                  second.polytope.id or second.member_ids[0]]),
                "members": list(members),
                "base_mm3": float(base),
                "base_exact": str(base),
                "hull_mm3": float(hull.volume()),
                "hull_exact": str(hull.volume()),
                "growth_mm3": float(growth),
                "growth_exact": str(growth),
                "facets_before": len(first.polytope.halfspaces)
                                 + len(second.polytope.halfspaces),
                "facets_after": len(hull.halfspaces),
                "base_approximate": approximate,
            })
            fresh.append(MergedObstacle(hull, base, members, approximate))
            consumed.update((i, j))
            next_id += 1
        if not fresh:
            break
        state = [s for k, s in enumerate(state) if k not in consumed] + fresh
    obstacles = [s.polytope for s in state]
    return dataclasses.replace(region, obstacles=obstacles), log


# ---------------------------------------------------------------------------
# facet dropping


def _facet_area_sq(groups: dict, plane_key: tuple) -> Fraction:
    """Squared area of the facet lying on the given canonical plane, from a
    ``facet_triangles()`` grouping (zero when the plane carries no facet)."""
    tris = groups.get(plane_key)
    if not tris:
        return Fraction(0)
    sx = sy = sz = Fraction(0)
    for (pa, pb, pc) in tris:
        n = cross3(pb - pa, pc - pa)
        sx += n.x
        sy += n.y
        sz += n.z
    return (sx * sx + sy * sy + sz * sz) / 4


def _exact_growth(candidate: Halfspace, remaining: Sequence[Halfspace],
                  hull_rows: Sequence[Halfspace]):
    """Exact optimum of (n.x - d)/|n| over the intersection of the remaining
    facets with the trunk hull: how far the forbidden set can now reach past
    the dropped facet plane.  Returns (numerator Fraction, |n|^2 int) with
    growth = numerator / sqrt(|n|^2), or None when the intersection is empty.
    """
    poly = _polytope_from_rows(list(remaining) + list(hull_rows))
    if poly is None:
        return None
    best = None
    for v in poly.vertices:
        val = candidate.value(v)
        if best is None or val > best:
            best = val
    nn = candidate.a ** 2 + candidate.b ** 2 + candidate.c ** 2
    return best, nn


def _growth_within(numerator: Fraction, norm_sq: int, bound: Fraction) -> bool:
    """numerator / sqrt(norm_sq) <= bound, decided exactly."""
    if numerator <= 0:
        return True
    if bound <= 0:
        return False
    return numerator * numerator <= bound * bound * norm_sq


def drop_facets(region, max_growth_mm=DEFAULT_DROP_MM):
    """Remove obstacle facets whose removal grows the forbidden set inside
    the hull by at most ``max_growth_mm`` (a distance past the facet plane).

    Returns ``(region_with_simplified_obstacles, log_entries)``.  Per
    obstacle, candidate facets are visited by ascending exact facet area;
    after each removal the obstacle is recomputed and the candidate scan
    restarts.  A fast floating-point LP rejects clearly-too-large growths;
    every removal is confirmed in exact arithmetic.  If the LP fails
    numerically the facet is kept and the failure logged.
    """
    bound = to_fraction(max_growth_mm)
    if bound < 0:
        raise ValueError("max_growth_mm must be non-negative")
    bound_float = float(bound)
    margin = enlarged_hull(region.hull)
    hull_rows = list(region.hull.halfspaces)
    log: List[dict] = []
    new_obstacles = []
    for obs in sorted(region.obstacles, key=lambda o: o.id or ""):
        rows = list(obs.halfspaces)
        poly = obs
        failed_keys = set()
        while True:
            groups = poly.facet_triangles()
            order = sorted(range(len(rows)),
                           key=lambda k: (_facet_area_sq(groups, rows[k].key()),
                                          rows[k].key()))
            dropped = False
            for idx in order:
                candidate = rows[idx]
                if candidate.key() in failed_keys:
                    continue
                remaining = rows[:idx] + rows[idx + 1:]
                norm = float(np.sqrt(candidate.a ** 2 + candidate.b ** 2
                                     + candidate.c ** 2))
                try:
                    out = maximize_direction(
                        [candidate.a / norm, candidate.b / norm,
                         candidate.c / norm],
                        remaining + hull_rows)
                except NumericalFailure as exc:
                    log.append({"obstacle": obs.id, "status": "lp_failure",
                                "facet": candidate.as_dict(),
                                "error": str(exc)})
                    failed_keys.add(candidate.key())
                    continue
                if out.feasible:
                    opt = out.value - float(candidate.d) / norm
                    if opt > bound_float + _LP_FILTER_SLOP:
                        continue
                exact = _exact_growth(candidate, remaining, hull_rows)
                if exact is not None:
                    numerator, norm_sq = exact
                    if not _growth_within(numerator, norm_sq, bound):
                        continue
                    growth_mm = float(numerator) / float(np.sqrt(norm_sq))
                    growth_exact = {"num": str(numerator), "norm_sq": norm_sq}
                else:
                    growth_mm = 0.0
                    growth_exact = {"num": "0", "norm_sq": 1}
                rows = remaining
                poly = intersect_halfspaces(rows, margin, id=obs.id)
                log.append({"obstacle": obs.id, "status": "dropped",
                            "facet": candidate.as_dict(),
                            "growth_mm": growth_mm,
                            "growth_exact": growth_exact,
                            "bound_mm": float(bound)})
                dropped = True
                break
            if not dropped:
                break
        new_obstacles.append(poly)
    return dataclasses.replace(region, obstacles=new_obstacles), log


# ---------------------------------------------------------------------------
# reporting


def shared_sample_volumes(before, after, samples: Optional[int] = None,
                          seed: Optional[int] = None):
    """Monte Carlo free-volume estimates of two descriptions of the same
    region from one shared sample set.  Returns (points, mask_before,
    mask_after, bbox_volume)."""
    samples = samples if samples is not None else getattr(before, "samples", None)
    seed = seed if seed is not None else getattr(before, "seed", None)
    if samples is None or seed is None:
        raise ValueError("sample count and seed are required when the region "
                         "carries no sampling metadata")
    lo, hi = before.hull.bbox()
    pts = sample_lattice_points((lo, hi), samples, seed)
    mask_before = classify_feasible(pts, before.hull, before.obstacles)
    mask_after = classify_feasible(pts, after.hull, after.obstacles)
    bbox_volume = ((hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]))
    return pts, mask_before, mask_after, bbox_volume


def facet_count(region) -> int:
    return (len(region.hull.halfspaces)
            + sum(len(o.halfspaces) for o in region.obstacles))


def simplification_report(before, after, samples: Optional[int] = None,
                          seed: Optional[int] = None) -> dict:
    """Volume and facet-count ratios of a simplified region against the
    original, with the volumes estimated from a shared sample seed."""
    _, mask_b, mask_a, bbox_vol = shared_sample_volumes(before, after,
                                                        samples, seed)
    n = len(mask_b)
    vol_b = float(bbox_vol) * (int(mask_b.sum()) / n)
    vol_a = float(bbox_vol) * (int(mask_a.sum()) / n)
    fc_b = facet_count(before)
    fc_a = facet_count(after)
    return {
        "box": before.box_id,
        "orientation": before.orientation,
        "samples": n,
        "volume_before_mm3": vol_b,
        "volume_after_mm3": vol_a,
        "volume_ratio_pct": 100.0 * vol_a / vol_b if vol_b else 0.0,
        "facets_before": fc_b,
        "facets_after": fc_a,
        "facet_ratio_pct": 100.0 * fc_a / fc_b if fc_b else 0.0,
    }


def contractiveness_violations(before, after, samples: Optional[int] = None,
                               seed: Optional[int] = None) -> dict:
    """Count sampled centers free in the simplified description but not in
    the original.  Simplification only ever grows the forbidden set, so any
    such center is a soundness violation."""
    _, mask_b, mask_a, _ = shared_sample_volumes(before, after, samples, seed)
    return {"checked": int(len(mask_b)),
            "violations": int(np.count_nonzero(mask_a & ~mask_b))}


def write_log(path: str, entries: Sequence[dict]) -> None:
    """Append-style JSONL dump of merge/drop log entries."""
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")


def read_log(path: str) -> List[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
