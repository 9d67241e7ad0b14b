"""Minimal decomposition of x -> x**2 on Z_p.

Z_p splits into periodic points, minimal components (finite unions of
disks around each periodic orbit) and attracting basins.  Components are
found constructively by simulating f on the sphere residues around each
orbit; the closed-form counts are kept alongside so that the two can be
compared.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .level_graph import (
    build_graph,
    check_odd_prime,
    check_prime,
    cycle_census,
    cycles_of,
    unit_cycles,
)
from .lift_engine import CycleAtLevel, predicted_cycle_census
from .numtheory import DomainError, mul_order, wieferich_valuation
from .padic import AtLeast, PadicInt, PrecisionError, diff_valuation, teichmuller

DEFAULT_DEPTH = 3
DEFAULT_MAX_SPHERE_POINTS = 500_000

_residues = {"type": "array", "items": {"type": "string", "pattern": "^[0-9]+$"}}
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["p", "N", "depth", "special_p2", "periodic", "minimal", "basin"],
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "N": {"type": "integer", "minimum": 1},
        "depth": {"type": "integer", "minimum": 1},
        "special_p2": {"type": "boolean"},
        "s": {"type": ["integer", "null"], "minimum": 1},
        "periodic": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["d", "length", "centers"],
                "properties": {
                    "index": {"type": ["integer", "null"]},
                    "d": {"type": ["integer", "null"], "minimum": 1},
                    "length": {"type": "integer", "minimum": 1},
                    "centers": _residues,
                },
            },
        },
        "minimal": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["orbit", "sphere", "count_total", "j", "radius_exp",
                             "disks", "odometer", "sampled"],
                "properties": {
                    "orbit": {"type": "integer", "minimum": 0},
                    "sphere": {"type": "integer", "minimum": 1},
                    "id": {"type": "array", "prefixItems": [
                        {"type": "integer"}, {"type": "integer"}, {"type": "string"}]},
                    "count_total": {"type": "integer", "minimum": 1},
                    "j": {"type": "integer", "minimum": 1},
                    "radius_exp": {"type": "integer", "minimum": 2},
                    "disks": _residues,
                    "odometer": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                    "sampled": {"type": "boolean"},
                },
            },
        },
        "basin": {
            "type": "object",
            "required": ["zero_disk", "tree_residues"],
            "properties": {
                "zero_disk": {"const": True},
                "tree_residues": _residues,
                "description": {"type": "string"},
            },
        },
    },
}


@dataclass(frozen=True)
class PeriodicOrbit:
    """A periodic orbit in the units, centers ordered along the orbit
    starting from the lift of the smallest level-1 residue."""

    p: int
    d: int
    length: int
    centers: tuple[PadicInt, ...]
    index: int = 0

    @property
    def precision(self) -> int:
        return self.centers[0].precision

    def centers_mod(self, level: int) -> list[int]:
        if level > self.precision:
            raise PrecisionError(
                f"orbit known to precision {self.precision}, level {level} requested"
            )
        modulus = self.p**level
        return [c.value % modulus for c in self.centers]


def periodic_orbits(p: int, precision: int) -> list[PeriodicOrbit]:
    """Periodic orbits in Z_p^x, one per level-1 unit cycle, sorted by
    (d, smallest level-1 residue)."""
    check_odd_prime(p)
    keyed = []
    for cyc in unit_cycles(p):
        d = mul_order(cyc[0], p)
        centers = tuple(teichmuller(c, p, precision) for c in cyc)
        keyed.append((d, cyc[0], PeriodicOrbit(p, d, len(cyc), centers)))
    keyed.sort(key=lambda t: t[:2])
    return [
        PeriodicOrbit(orb.p, orb.d, orb.length, orb.centers, i)
        for i, (_, _, orb) in enumerate(keyed)
    ]


def disk_count(p: int, ell: int) -> int:
    """j = l * ord_p(2) / gcd(ord_p(2), l)."""
    o = mul_order(2, p)
    return ell * o // math.gcd(o, ell)


def component_count(p: int, ell: int, s: int | None = None) -> int:
    """Number of minimal components on one sphere union around an orbit."""
    if s is None:
        s = wieferich_valuation(p).s
    o = mul_order(2, p)
    return (p - 1) * math.gcd(o, ell) // o * p ** (s - 1)


@dataclass(frozen=True)
class MinimalComponent:
    p: int
    orbit_index: int
    orbit_length: int
    sphere_index: int
    disk_count: int
    radius_exponent: int
    disk_centers: tuple[int, ...]  # orbit order, starting at the smallest
    sphere_position: int  # orbit position whose sphere holds disk_centers[0]
    count_total: int
    sampled: bool = False

    @property
    def component_id(self) -> tuple[int, int, int]:
        """(orbit index, orbit position of the smallest center, smallest center)."""
        return (self.orbit_index, self.sphere_position, self.disk_centers[0])

    def odometer(self, terms: int = 5) -> list[int]:
        return odometer_sequence(self, terms)


def _make_component(orbit: PeriodicOrbit, n: int, level: int, cyc: list[int],
                    count_total: int, sampled: bool) -> MinimalComponent:
    pos = orbit.centers_mod(1).index(cyc[0] % orbit.p)
    return MinimalComponent(orbit.p, orbit.index, orbit.length, n, len(cyc), level,
                            tuple(cyc), pos, count_total, sampled)


def sphere_residues(orbit: PeriodicOrbit, n: int, level: int) -> list[int]:
    """Residues mod p^level at distance exactly p^-n from some orbit center."""
    p = orbit.p
    pn, modulus = p**n, p**level
    return [
        (c + pn * u) % modulus
        for c in orbit.centers_mod(level)
        for u in range(p ** (level - n))
        if u % p
    ]


def sphere_decomposition(orbit: PeriodicOrbit, n: int,
                         max_points: int = DEFAULT_MAX_SPHERE_POINTS) -> list[MinimalComponent]:
    """Minimal components on the sphere union at distance p^-n from the orbit.

    Every residue mod p^(n+s) on the spheres lies on a cycle of f_{n+s}; each
    cycle is one component.  When the spheres hold more than ``max_points``
    residues, only the component through center + p^n is traced and returned
    with ``sampled=True``.
    """
    if n < 1:
        raise DomainError(f"sphere index must be >= 1, got {n}")
    p = orbit.p
    s = wieferich_valuation(p).s
    level = n + s
    if level > orbit.precision:
        raise PrecisionError(
            f"sphere {n} needs precision {level}, orbit has {orbit.precision}"
        )
    total = component_count(p, orbit.length, s)
    modulus = p**level
    square = lambda y: y * y % modulus  # noqa: E731
    size = orbit.length * (p - 1) * p ** (s - 1)
    if size <= max_points:
        cycles = cycles_of(sphere_residues(orbit, n, level), square)
        return [_make_component(orbit, n, level, c, total, False) for c in cycles]

    cyc = CycleAtLevel.through((orbit.centers_mod(level)[0] + p**n) % modulus, p, level)
    j = disk_count(p, orbit.length)
    if cyc.length != j:
        raise AssertionError(f"sampled component has {cyc.length} disks, expected {j}")
    return [_make_component(orbit, n, level, cyc.vertices(), total, True)]


def odometer_sequence(comp: MinimalComponent, terms: int = 5) -> list[int]:
    """Structure sequence (l, j, j*p, j*p^2, ...) of the component's odometer.

    j is the cycle length of the component at its own level and it grows by
    a factor p at every further level.
    """
    if terms < 2:
        raise DomainError("need at least two terms")
    seq = [comp.orbit_length, comp.disk_count]
    while len(seq) < terms:
        seq.append(seq[-1] * comp.p)
    return seq


@dataclass
class DecompositionReport:
    p: int
    precision: int
    depth: int
    s: int | None
    orbits: list[PeriodicOrbit]
    components: list[MinimalComponent]
    tree_residues: list[int]

    @property
    def special_p2(self) -> bool:
        return self.p == 2

    def periodic_points(self) -> list[int]:
        """Residues (mod p^N) of every periodic point, 0 included."""
        return [0] + [c.value for orb in self.orbits for c in orb.centers]

    def to_json(self) -> dict:
        periodic = [{"index": None, "d": None, "length": 1, "centers": ["0"]}]
        periodic += [
            {"index": o.index, "d": o.d, "length": o.length,
             "centers": [str(c.value) for c in o.centers]}
            for o in self.orbits
        ]
        minimal = [
            {
                "orbit": c.orbit_index,
                "sphere": c.sphere_index,
                "id": [c.component_id[0], c.component_id[1], str(c.component_id[2])],
                "count_total": c.count_total,
                "j": c.disk_count,
                "radius_exp": c.radius_exponent,
                "disks": [str(x) for x in c.disk_centers],
                "odometer": odometer_sequence(c, 4),
                "sampled": c.sampled,
            }
            for c in self.components
        ]
        if self.special_p2:
            description = "Z_2 minus {0, 1}: even points tend to 0, odd points tend to 1"
        else:
            description = "pZ_p minus {0} tends to 0; tree residues feed the level-1 cycles"
        return {
            "p": self.p,
            "N": self.precision,
            "depth": self.depth,
            "special_p2": self.special_p2,
            "s": self.s,
            "periodic": periodic,
            "minimal": minimal,
            "basin": {
                "zero_disk": True,
                "tree_residues": [str(x) for x in self.tree_residues],
                "description": description,
            },
        }

    def to_text(self) -> str:
        out = [f"square map on Z_{self.p}  (precision {self.precision}, depth {self.depth})"]
        if self.special_p2:
            out += ["periodic points: 0, 1 (attracting fixed points)",
                    "minimal components: none",
                    "basin: Z_2 minus {0, 1}"]
            return "\n".join(out) + "\n"
        out.append(f"v_p(2^(p-1)-1) = {self.s}")
        out.append("fixed point 0, basin pZ_p minus {0}")
        out.append(f"tree residues ({len(self.tree_residues)}): "
                   + " ".join(map(str, self.tree_residues)))
        for orb in self.orbits:
            out.append(f"orbit {orb.index}: d={orb.d} length={orb.length} centers mod p: "
                       + " ".join(str(x) for x in orb.centers_mod(1)))
            for n in range(1, self.depth + 1):
                comps = [c for c in self.components
                         if c.orbit_index == orb.index and c.sphere_index == n]
                if not comps:
                    continue
                c0 = comps[0]
                tag = " (sampled)" if c0.sampled else ""
                out.append(f"  sphere {n}: {c0.count_total} components of {c0.disk_count} "
                           f"disks, radius {self.p}^-{c0.radius_exponent}{tag}")
                for c in comps:
                    out.append(f"    {c.component_id}: odometer {odometer_sequence(c, 4)}")
        return "\n".join(out) + "\n"


def decompose(p: int, depth: int = DEFAULT_DEPTH, precision: int | None = None,
              max_points: int = DEFAULT_MAX_SPHERE_POINTS) -> DecompositionReport:
    check_prime(p)
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    if p == 2:
        one = PeriodicOrbit(2, 1, 1, (PadicInt(2, precision or 1, 1),), 0)
        return DecompositionReport(2, precision or 1, depth, None, [one], [], [])
    s = wieferich_valuation(p).s
    if precision is None:
        precision = depth + s + 4
    if precision < depth + s:
        raise PrecisionError(f"depth {depth} needs precision >= {depth + s}, got {precision}")
    orbits = periodic_orbits(p, precision)
    on_cycle = {c for orb in orbits for c in orb.centers_mod(1)}
    trees = [x for x in range(1, p) if x not in on_cycle]
    comps = [
        comp
        for orb in orbits
        for n in range(1, depth + 1)
        for comp in sphere_decomposition(orb, n, max_points)
    ]
    return DecompositionReport(p, precision, depth, s, orbits, comps, trees)


@dataclass(frozen=True)
class Location:
    kind: str  # fixed_point_zero | zero_basin | periodic | minimal_component | tree_basin | one_basin
    orbit: int | None = None
    position: int | None = None
    sphere: int | None = None
    component_id: tuple[int, int, int] | None = None
    disk_count: int | None = None
    tree_depth: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        for key in ("orbit", "position", "sphere", "disk_count", "tree_depth"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.component_id is not None:
            a, b, c = self.component_id
            out["component_id"] = [a, b, str(c)]
        return out

    def __str__(self):
        keys = ("orbit", "position", "sphere", "component_id", "disk_count", "tree_depth")
        fields = ", ".join(f"{k}={getattr(self, k)}" for k in keys
                           if getattr(self, k) is not None)
        return f"{self.kind}({fields})" if fields else self.kind


def locate(x: PadicInt, exact: bool = False) -> Location:
    """Which piece of the decomposition contains ``x``.

    With ``exact=True`` the residue is read as an exact integer, which makes
    the periodic point 1 decidable.  Otherwise a unit that agrees with an
    orbit center to full precision raises ``PrecisionError``.
    """
    p, N = x.p, x.precision
    check_prime(p)
    if x.value == 0:
        return Location("fixed_point_zero")
    if x.value % p == 0:
        return Location("zero_basin")
    if p == 2:
        if x.value == 1:
            if exact:
                return Location("periodic", orbit=0, position=0)
            raise PrecisionError("x agrees with the fixed point 1 to full precision")
        return Location("one_basin")

    residue = x.value % p
    orbits = periodic_orbits(p, N)
    for orb in orbits:
        level1 = orb.centers_mod(1)
        if residue not in level1:
            continue
        pos = level1.index(residue)
        v = diff_valuation(x, orb.centers[pos])
        if isinstance(v, AtLeast):
            if exact and orb.centers[pos].value == x.value == 1:
                return Location("periodic", orbit=orb.index, position=pos)
            raise PrecisionError(
                f"x agrees with periodic center {orb.centers[pos].value} to precision {N}"
            )
        s = wieferich_valuation(p).s
        level = v + s
        if level > N:
            raise PrecisionError(f"x at sphere {v} needs precision {level}, has {N}")
        cyc = CycleAtLevel.through(x.value % p**level, p, level)
        pos_min = level1.index(cyc.rep % p)
        return Location("minimal_component", orbit=orb.index, position=pos, sphere=v,
                        component_id=(orb.index, pos_min, cyc.rep), disk_count=cyc.length)

    depth = 0
    y = residue
    while all(y not in orb.centers_mod(1) for orb in orbits):
        y = y * y % p
        depth += 1
    orb = next(o for o in orbits if y in o.centers_mod(1))
    return Location("tree_basin", orbit=orb.index, position=orb.centers_mod(1).index(y),
                    tree_depth=depth)


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    p: int
    max_level: int
    checks: list[Check] = field(default_factory=list)
    complete: bool = True

    @property
    def ok(self) -> bool:
        return self.complete and all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    def to_text(self) -> str:
        lines = [f"{'PASS' if c.ok else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else "")
                 for c in self.checks]
        if not self.complete:
            lines.append("INCOMPLETE deadline reached before all levels were checked")
        lines.append(f"{'PASS' if self.ok else 'FAIL'} p={self.p} max_level={self.max_level} "
                     f"({len(self.checks) - len(self.failures())}/{len(self.checks)} checks)")
        return "\n".join(lines) + "\n"


def _single_cycle(residues: set[int], modulus: int) -> bool:
    start = next(iter(residues))
    x, steps = start, 0
    while True:
        x = x * x % modulus
        steps += 1
        if x not in residues:
            return False
        if x == start:
            return steps == len(residues)


def verify_decomposition(p: int, max_level: int, max_seconds: float | None = None,
                         max_nodes: int | None = None) -> VerificationReport:
    """Check the decomposition against brute force on Z/p^nZ for n <= max_level."""
    check_odd_prime(p)
    report = VerificationReport(p, max_level)
    s = wieferich_valuation(p).s
    orbits = periodic_orbits(p, max_level + s + 1)
    deadline = None if max_seconds is None else time.monotonic() + max_seconds

    for n in range(1, max_level + 1):
        if deadline is not None and time.monotonic() > deadline:
            report.complete = False
            break
        g = build_graph(p, n, max_nodes)
        observed, predicted = cycle_census(g), predicted_cycle_census(p, n)
        report.add(f"census level {n}", observed == predicted,
                   f"oracle {observed} predicted {predicted}")

        modulus = p**n
        for orb in orbits:
            shadow = CycleAtLevel.through(orb.centers_mod(n)[0], p, n)
            report.add(f"shadow orbit {orb.index} level {n}", shadow.length == orb.length,
                       f"length {shadow.length}")
            for c in orb.centers_mod(n):
                counts = [0] * n
                for t in range(p ** (n - 1)):
                    y = (c + p * t) % modulus
                    if y != c:
                        counts[padic_val_mod(y - c, p, n)] += 1
                expected = [0] + [(p - 1) * p ** (n - i - 1) for i in range(1, n)]
                if counts != expected:
                    report.add(f"sphere sizes orbit {orb.index} level {n}", False,
                               f"{counts} != {expected}")
                    break
            else:
                report.add(f"sphere sizes orbit {orb.index} level {n}", True)

    for orb in orbits:
        j = disk_count(p, orb.length)
        count = component_count(p, orb.length, s)
        for n in range(1, max_level - s + 1):
            name = f"orbit {orb.index} sphere {n}"
            comps = sphere_decomposition(orb, n)
            level = n + s
            report.add(f"{name} count", len(comps) == count, f"{len(comps)} vs {count}")
            report.add(f"{name} disks", all(c.disk_count == j for c in comps), f"j={j}")
            covered = sorted(x for c in comps for x in c.disk_centers)
            report.add(f"{name} partition", covered == sorted(sphere_residues(orb, n, level)))
            measure = Fraction(len(comps) * j, p**level)
            report.add(f"{name} measure", measure == Fraction(orb.length * (p - 1), p ** (n + 1)),
                       str(measure))
            for upper in range(level, max_level + 1):
                mod = p**upper
                step = p**level
                ok = all(
                    _single_cycle({c + step * t for c in comp.disk_centers
                                   for t in range(p ** (upper - level))}, mod)
                    for comp in comps
                )
                report.add(f"{name} minimal at level {upper}", ok)
    return report


def padic_val_mod(x: int, p: int, n: int) -> int:
    """v_p(x mod p^n) for x not divisible by p^n."""
    x %= p**n
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v
