"""Triangle-based topology-control algorithm family.

Each algorithm is an attribute predicate over a directed triangle plus a
total strict link order.  The predicate decides whether the triangle's
e_ab link may be inactive; the link order drives processing order,
tie-breaking oracles and the blocking-triangle repair.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

from .topology import Topology, Triangle, UNDEFINED_HOP_COUNT

#: Power-model coefficient used to derive expected link lifetimes for
#: e-kTC decisions (r = energy / (c * w^2)).  Predicates are invariant to
#: its value, but it must match the energy module's default.
DEFAULT_POWER_COEFFICIENT = 0.01


@dataclass
class TriangleView:
    """Snapshot of the attributes a predicate may read.

    Holds weights, ids and angles of the three links, the endpoint
    attributes, and the expected remaining lifetime r of each link.
    """

    w_ab: float
    w_ac: float
    w_cb: float
    id_ab: int
    id_ac: int
    id_cb: int
    angle_ab: float = 0.0
    angle_ac: float = 0.0
    angle_cb: float = 0.0
    h_a: int = UNDEFINED_HOP_COUNT
    h_b: int = UNDEFINED_HOP_COUNT
    h_c: int = UNDEFINED_HOP_COUNT
    energy_a: float = 0.0
    energy_b: float = 0.0
    energy_c: float = 0.0
    r_ab: float = math.inf
    r_ac: float = math.inf
    r_cb: float = math.inf


def view_from_triangle(topology: Topology, tri: Triangle,
                       need_angles: bool = False,
                       power_coefficient: float = DEFAULT_POWER_COEFFICIENT,
                       ) -> TriangleView:
    e_ab = topology.link(tri.e_ab)
    e_ac = topology.link(tri.e_ac)
    e_cb = topology.link(tri.e_cb)
    a = topology.nodes[e_ab.source]
    b = topology.nodes[e_ab.target]
    c = topology.nodes[e_ac.target]

    def lifetime(energy: float, weight: float) -> float:
        power = power_coefficient * weight * weight
        return energy / power

    view = TriangleView(
        w_ab=e_ab.weight, w_ac=e_ac.weight, w_cb=e_cb.weight,
        id_ab=e_ab.id, id_ac=e_ac.id, id_cb=e_cb.id,
        h_a=a.hop_count, h_b=b.hop_count, h_c=c.hop_count,
        energy_a=a.energy, energy_b=b.energy, energy_c=c.energy,
        r_ab=lifetime(a.energy, e_ab.weight),
        r_ac=lifetime(a.energy, e_ac.weight),
        r_cb=lifetime(c.energy, e_cb.weight),
    )
    if need_angles:
        view.angle_ab = topology.link_angle(tri.e_ab)
        view.angle_ac = topology.link_angle(tri.e_ac)
        view.angle_cb = topology.link_angle(tri.e_cb)
    return view


# -- predicates -------------------------------------------------------

def pi_maxpower(view: TriangleView) -> bool:
    """Never inactivates anything; all links stay active."""
    return False


def _tie_break(w_ab: float, w_ac: float, w_cb: float,
               id_ab: int, id_ac: int, id_cb: int) -> bool:
    """Equal-weight ties go to the link with the larger id."""
    if w_ab == w_ac and not id_ab > id_ac:
        return False
    if w_ab == w_cb and not id_ab > id_cb:
        return False
    return True


def pi_ktc(view: TriangleView, k: float) -> bool:
    if (view.w_ab >= max(view.w_ac, view.w_cb)
            and view.w_ab >= k * min(view.w_ac, view.w_cb)):
        return _tie_break(view.w_ab, view.w_ac, view.w_cb,
                          view.id_ab, view.id_ac, view.id_cb)
    return False


def pi_xtc(view: TriangleView) -> bool:
    if view.w_ab >= max(view.w_ac, view.w_cb):
        return _tie_break(view.w_ab, view.w_ac, view.w_cb,
                          view.id_ab, view.id_ac, view.id_cb)
    return False


def pi_gg(view: TriangleView) -> bool:
    return view.w_ab ** 2 > view.w_ac ** 2 + view.w_cb ** 2


def pi_rng(view: TriangleView) -> bool:
    return view.w_ab > view.w_ac and view.w_ab > view.w_cb


def pi_lktc(view: TriangleView, k: float, a: float) -> bool:
    """kTC plus a hop-count guard bounding path stretch to the base station."""
    if not pi_ktc(view, k):
        return False
    if min(view.h_a, view.h_b, view.h_c) < 0:
        return False
    if view.h_a == view.h_b:
        return True
    h_high = max(view.h_a, view.h_b)
    return (view.h_c + 1) / max(1, h_high) < a


def pi_yao(view: TriangleView, cone_count: int) -> bool:
    """e_ab may be inactive if a shorter link e_ac leaves a in the same cone."""
    if not view.w_ab > view.w_ac:
        return False
    cone = 360.0 / cone_count
    return math.floor(view.angle_ab / cone) == math.floor(view.angle_ac / cone)


def _inverse_r(r: float) -> float:
    if r < 0:
        raise ValueError("expected remaining lifetime must be >= 0")
    if r == 0:
        return math.inf
    return 1.0 / r


def pi_ektc(view: TriangleView, k: float) -> bool:
    """kTC evaluated on transformed weights w' = 1/r.

    Links with small expected remaining lifetime are expensive; the
    triangle's shortest-lived link may be inactivated when it is at
    least k times shorter-lived than the longest-lived one.
    """
    transformed = TriangleView(
        w_ab=_inverse_r(view.r_ab), w_ac=_inverse_r(view.r_ac),
        w_cb=_inverse_r(view.r_cb),
        id_ab=view.id_ab, id_ac=view.id_ac, id_cb=view.id_cb)
    return pi_ktc(transformed, k)


def pi_min_weight(view: TriangleView, w_min: float) -> bool:
    return min(view.w_ab, view.w_ac, view.w_cb) >= w_min


def compose_and(p1: Callable[[TriangleView], bool],
                p2: Callable[[TriangleView], bool],
                ) -> Callable[[TriangleView], bool]:
    return lambda view: p1(view) and p2(view)


# -- algorithm specs --------------------------------------------------

@dataclass
class AlgorithmSpec:
    """A named TC algorithm: predicate, link order, relevant attributes."""

    name: str
    predicate: Callable[[TriangleView], bool]
    params: dict[str, float] = field(default_factory=dict)
    strict_dominance: bool = True
    #: node/link attributes whose modification invalidates classifications
    relevant_attributes: frozenset[str] = frozenset({"weight"})
    needs_angles: bool = False
    #: e-kTC orders links by expected remaining lifetime instead of weight
    order_by_lifetime: bool = False
    power_coefficient: float = DEFAULT_POWER_COEFFICIENT

    def view(self, topology: Topology, tri: Triangle) -> TriangleView:
        return view_from_triangle(topology, tri, self.needs_angles,
                                  self.power_coefficient)

    def holds(self, topology: Topology, tri: Triangle) -> bool:
        """Evaluate the predicate on a triangle of the topology."""
        return self.predicate(self.view(topology, tri))

    def link_key(self, topology: Topology, lid: int) -> tuple[float, int]:
        """Sort key realizing the total strict link order (ascending)."""
        link = topology.link(lid)
        if self.order_by_lifetime:
            # kTC order on transformed weights 1/r: shortest-lived links
            # are largest, so the predicate-maximal link is order-maximal.
            node = topology.nodes[link.source]
            power = self.power_coefficient * link.weight ** 2
            return (-node.energy / power, lid)
        return (link.weight, lid)

    def precedes(self, topology: Topology, e1: int, e2: int) -> bool:
        return self.link_key(topology, e1) < self.link_key(topology, e2)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


def make_algorithm(name: str, *, k: float = 1.41, a: float = 2.0,
                   cone_count: int = 6, w_min: float = 0.0,
                   power_coefficient: float = DEFAULT_POWER_COEFFICIENT,
                   ) -> AlgorithmSpec:
    """Construct a named algorithm; unused parameters are ignored."""
    if name == "maxpower":
        return AlgorithmSpec("maxpower", pi_maxpower,
                             relevant_attributes=frozenset())
    if name == "ktc":
        _require(k >= 1, "ktc requires k >= 1")
        return AlgorithmSpec("ktc", lambda v: pi_ktc(v, k), {"k": k})
    if name == "xtc":
        return AlgorithmSpec("xtc", pi_xtc)
    if name == "gg":
        return AlgorithmSpec("gg", pi_gg)
    if name == "rng":
        return AlgorithmSpec("rng", pi_rng)
    if name == "lktc":
        _require(k >= 1, "lktc requires k >= 1")
        _require(a > 1, "lktc requires a > 1")
        return AlgorithmSpec(
            "lktc", lambda v: pi_lktc(v, k, a), {"k": k, "a": a},
            relevant_attributes=frozenset({"weight", "hop_count"}))
    if name == "yao":
        _require(cone_count >= 1, "yao requires cone_count >= 1")
        return AlgorithmSpec(
            "yao", lambda v: pi_yao(v, cone_count),
            {"cone_count": cone_count}, strict_dominance=False,
            relevant_attributes=frozenset({"weight", "latitude", "longitude"}),
            needs_angles=True)
    if name == "ektc":
        _require(k >= 1, "ektc requires k >= 1")
        return AlgorithmSpec(
            "ektc", lambda v: pi_ektc(v, k), {"k": k},
            relevant_attributes=frozenset({"weight", "energy"}),
            order_by_lifetime=True, power_coefficient=power_coefficient)
    raise ValueError(f"unknown algorithm {name!r}")


def with_min_weight(algorithm: AlgorithmSpec, w_min: float) -> AlgorithmSpec:
    """Restrict an algorithm to triangles whose links all weigh >= w_min."""
    _require(w_min >= 0, "w_min must be >= 0")
    restricted = AlgorithmSpec(
        name=f"{algorithm.name}+minweight",
        predicate=compose_and(algorithm.predicate,
                              lambda v: pi_min_weight(v, w_min)),
        params={**algorithm.params, "w_min": w_min},
        strict_dominance=algorithm.strict_dominance,
        relevant_attributes=algorithm.relevant_attributes | {"weight"},
        needs_angles=algorithm.needs_angles,
        order_by_lifetime=algorithm.order_by_lifetime,
        power_coefficient=algorithm.power_coefficient)
    return restricted


_SPEC_RE = re.compile(r"^\s*(\w+)\s*(?:\(([^)]*)\))?\s*$")


def _parse_args(text: str | None) -> dict[str, float]:
    args: dict[str, float] = {}
    if not text or not text.strip():
        return args
    for part in text.split(","):
        key, _, value = part.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ValueError(f"malformed algorithm argument {part!r}")
        args[key] = float(value)
    return args


def parse_algorithm(spec: str,
                    power_coefficient: float = DEFAULT_POWER_COEFFICIENT,
                    ) -> AlgorithmSpec:
    """Parse an algorithm selection string.

    Grammar: ``maxpower | ktc(k=...) | xtc | gg | rng | lktc(k=...,a=...)
    | yao(cones=...) | ektc(k=...)`` optionally suffixed
    ``+minweight(w=...)``.
    """
    base_text, _, suffix = spec.partition("+")
    match = _SPEC_RE.match(base_text)
    if not match:
        raise ValueError(f"malformed algorithm spec {spec!r}")
    name = match.group(1)
    args = _parse_args(match.group(2))
    kwargs: dict = {"power_coefficient": power_coefficient}
    if "k" in args:
        kwargs["k"] = args.pop("k")
    if "a" in args:
        kwargs["a"] = args.pop("a")
    if "cones" in args:
        kwargs["cone_count"] = int(args.pop("cones"))
    if args:
        raise ValueError(f"unknown algorithm arguments {sorted(args)}")
    algorithm = make_algorithm(name, **kwargs)
    if suffix:
        smatch = _SPEC_RE.match(suffix)
        if not smatch or smatch.group(1) != "minweight":
            raise ValueError(f"malformed algorithm suffix {suffix!r}")
        sargs = _parse_args(smatch.group(2))
        if set(sargs) - {"w"}:
            raise ValueError("minweight takes only w=...")
        algorithm = with_min_weight(algorithm, sargs.get("w", 0.0))
    return algorithm
