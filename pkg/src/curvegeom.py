"""
Argument-principle geometry of the boundary curve phi(unit circle).

Winding numbers are summed argument increments over the sampled polyline,
with dyadic refinement whenever a single increment exceeds pi/2. Windings
of analytic symbols count preimages in the disk (valence), which is what
the univalence and single-cover probes read off a polar grid of samples.
"""

import enum
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np
import pandas as pd
from more_itertools import sliced
from scipy.spatial import cKDTree

from .exceptions import EmptyProfile, OnCurveError, OracleMismatch, ResolutionExhausted
from .symbolcore import NOISE_FLOOR, complex_pair

logger = logging.getLogger(__name__)

DEFAULT_NODES = 4096
MIN_NODES = 256
MAX_NODES = 2 ** 20
ON_CURVE_DISTANCE = 1e-6
PROFILE_CLEARANCE = 1e-4
MAX_INCREMENT = np.pi / 2
MAX_RESIDUAL = 0.01
COLLISION_DISTANCE = 1e-10
GRAZING_DISTANCE = 1e-9
ROOT_CLUSTER = 1e-5
BATCH_SIZE = 256
BATCH_ELEMENTS = BATCH_SIZE * DEFAULT_NODES


def batch_size(M):
    """Targets per chunk so that a chunk holds at most BATCH_ELEMENTS node pairs"""
    return max(1, BATCH_ELEMENTS // M)


@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """Closed polyline through phi(exp(2 pi i j / M)), j = 0..M-1"""

    nodes: np.ndarray
    source: str = ''
    symbol: object = field(default=None, repr=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=complex).ravel()
        M = nodes.size
        if M < MIN_NODES or M & (M - 1):
            raise ValueError(f"boundary curves need a power-of-two node count >= {MIN_NODES}, got {M}")
        nodes.setflags(write=False)
        object.__setattr__(self, 'nodes', nodes)

    @classmethod
    def from_symbol(cls, s, M=DEFAULT_NODES):
        return cls(s.eval_circle(M), s.label, s)

    @property
    def size(self):
        return self.nodes.size

    @cached_property
    def refined(self):
        """The same curve sampled at twice the nodes, or None past the cap"""
        if self.symbol is None or 2 * self.size > MAX_NODES:
            return None
        return BoundaryCurve.from_symbol(self.symbol, 2 * self.size)

    def segments(self):
        return self.nodes, np.roll(self.nodes, -1)

    def distance(self, w):
        """Distance from each target in ``w`` to the polyline"""
        w = np.atleast_1d(np.asarray(w, dtype=complex))
        start, end = self.segments()
        edge = end - start
        length2 = np.abs(edge) ** 2
        length2[length2 == 0] = 1
        parts = []
        for chunk in sliced(w, batch_size(self.size)):
            chunk = chunk[:, None]
            t = np.clip(np.real((chunk - start) * np.conj(edge)) / length2, 0, 1)
            parts.append(np.min(np.abs(chunk - (start + t * edge)), axis=1))
        return np.concatenate(parts) if parts else np.empty(0)


def _argument_sums(nodes, w):
    """Total argument increment and the largest single step, per target"""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    following = np.roll(nodes, -1)
    totals, steps = [], []
    for chunk in sliced(w, batch_size(nodes.size)):
        chunk = chunk[:, None]
        increments = np.angle((following - chunk) / (nodes - chunk))
        totals.append(increments.sum(axis=1) / (2 * np.pi))
        steps.append(np.abs(increments).max(axis=1))
    if not totals:
        return np.empty(0), np.empty(0)
    return np.concatenate(totals), np.concatenate(steps)


def winding_number(c, w):
    """Winding number of the boundary curve about ``w``"""
    w = complex(w)
    distance = float(c.distance(w)[0])
    if distance <= ON_CURVE_DISTANCE:
        raise OnCurveError(f"target {w} lies within {distance:.3g} of the curve {c.source!r}")

    curve = c
    while True:
        total, step = (value[0] for value in _argument_sums(curve.nodes, w))
        residual = abs(total - round(total))
        if step <= MAX_INCREMENT and residual < MAX_RESIDUAL:
            return int(round(total))
        if curve.refined is None:
            break
        logger.debug("refining %r to %d nodes for target %s (step %.3g)", c.source, 2 * curve.size, w, step)
        curve = curve.refined

    if residual >= MAX_RESIDUAL:
        raise ResolutionExhausted(
            f"winding about {w} did not settle at {curve.size} nodes (residual {residual:.3g})"
        )
    # The cap was hit with a settled sum; accept it
    return int(round(total))


def windings(c, targets):
    """Vectorized winding numbers, refining only the targets that need it"""
    targets = np.atleast_1d(np.asarray(targets, dtype=complex))
    totals, steps = _argument_sums(c.nodes, targets)
    result = np.rint(totals).astype(int)
    unsettled = (steps > MAX_INCREMENT) | (np.abs(totals - result) >= MAX_RESIDUAL)
    for index in np.flatnonzero(unsettled):
        result[index] = winding_number(c, targets[index])
    return result


def interior_roots(s, w, tol=NOISE_FLOOR):
    """Roots of s(z) - w inside the unit disk (companion-matrix eigenvalues)"""
    coeffs = np.array(s.coeffs[:s.degree(tol) + 1], dtype=complex)
    coeffs[0] -= w
    roots = np.roots(coeffs[::-1])
    return _merge_clusters(roots[np.abs(roots) < 1])


def _merge_clusters(roots):
    """Replace clusters of a split multiple root by their centroid"""
    roots = list(roots)
    merged = []
    while roots:
        seed = roots.pop(0)
        cluster = [seed] + [r for r in roots if abs(r - seed) < ROOT_CLUSTER]
        roots = [r for r in roots if abs(r - seed) >= ROOT_CLUSTER]
        centroid = complex(np.mean(cluster))
        merged.extend([centroid] * len(cluster))
        if len(cluster) > 1:
            logger.debug("merged %d roots near %s", len(cluster), centroid)
    return np.array(merged, dtype=complex)


def valence(s, w, M=DEFAULT_NODES):
    """Number of solutions of s(z) = w in the disk, with multiplicity"""
    count = winding_number(BoundaryCurve.from_symbol(s, M), w)
    if s.is_polynomial() and not s.is_constant():
        roots = interior_roots(s, w)
        if roots.size != count:
            raise OracleMismatch(f"winding {count} but {roots.size} interior roots of phi - {w}")
    return count


def critical_points(s, tol=NOISE_FLOOR):
    """Zeros of the derivative inside the unit disk"""
    derivative = s.derivative()
    if derivative.is_constant(tol):
        return np.array([], dtype=complex)
    return interior_roots(derivative, 0, tol)


@dataclass(frozen=True)
class ProfileEntry:
    a: complex
    w: complex
    n: int
    clearance: float

    def to_dict(self):
        return {'a': complex_pair(self.a), 'w': complex_pair(self.w), 'n': int(self.n)}


@dataclass(frozen=True)
class WindingProfile:
    entries: tuple
    excluded: tuple
    source: str = ''

    def windings(self):
        return sorted({entry.n for entry in self.entries})

    def to_frame(self):
        """Profile samples as a DataFrame (one row per entry)"""
        return pd.DataFrame(
            [{'a': e.a, 'w': e.w, 'n': e.n, 'clearance': e.clearance} for e in self.entries],
            columns=['a', 'w', 'n', 'clearance'],
        )

    def to_dict(self):
        return {
            'samples': [entry.to_dict() for entry in self.entries],
            'excluded': [{'a': complex_pair(a), 'w': complex_pair(w)} for a, w in self.excluded],
        }


def polar_grid(K):
    """Radii (i + 1/2)/K and K equispaced angles, in fixed enumeration order"""
    radii = (np.arange(K) + 0.5) / K
    angles = 2 * np.pi * np.arange(K) / K
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def winding_profile(s, K, M=DEFAULT_NODES):
    """Windings about phi(a) for a on a K x K polar grid"""
    if K < 8:
        raise ValueError(f"grid size must be at least 8, got {K}")
    curve = BoundaryCurve.from_symbol(s, M)
    samples = polar_grid(K)
    values = s.eval(samples)
    clearance = curve.distance(values)
    kept = clearance > PROFILE_CLEARANCE

    counts = windings(curve, values[kept])
    entries = tuple(
        ProfileEntry(complex(a), complex(w), int(n), float(d))
        for a, w, n, d in zip(samples[kept], values[kept], counts, clearance[kept])
    )
    excluded = tuple((complex(a), complex(w)) for a, w in zip(samples[~kept], values[~kept]))
    if not entries:
        raise EmptyProfile(f"all {samples.size} grid samples of {s.label!r} lie near the curve")
    logger.debug("profile of %r: %d samples, %d excluded, windings %s",
                 s.label, len(entries), len(excluded), sorted({e.n for e in entries}))
    return WindingProfile(entries, excluded, s.label)


def minimal_winding(p):
    """k(phi): the least nonzero winding in the profile"""
    nonzero = [entry.n for entry in p.entries if entry.n != 0]
    if not nonzero:
        raise EmptyProfile("profile has no nonzero winding")
    return min(nonzero)


def _clearest(entries):
    return max(entries, key=lambda entry: entry.clearance)


def is_winding_constant(p):
    """(True, None) when all windings agree, else (False, (high, low)) witness entries"""
    if not p.entries:
        raise EmptyProfile("profile is empty")
    values = p.windings()
    if len(values) == 1:
        return True, None
    high = _clearest([e for e in p.entries if e.n == values[-1]])
    low = _clearest([e for e in p.entries if e.n == values[0]])
    return False, (high, low)


@dataclass(frozen=True)
class JordanRecord:
    first: int
    second: int
    point: complex
    grazing: bool = False

    def to_dict(self):
        return {'segments': [self.first, self.second], 'point': complex_pair(self.point),
                'grazing': self.grazing}


def _cross(u, v):
    return np.imag(np.conj(u) * v)


def _point_segment_distance(p, start, end):
    edge = end - start
    length2 = np.abs(edge) ** 2
    t = np.clip(np.real((p - start) * np.conj(edge)) / np.where(length2 == 0, 1, length2), 0, 1)
    return np.abs(p - (start + t * edge))


def jordan_test(c):
    """Self-intersections between non-adjacent polyline segments"""
    start, end = c.segments()
    M = c.size
    xmin = np.minimum(start.real, end.real) - GRAZING_DISTANCE
    xmax = np.maximum(start.real, end.real) + GRAZING_DISTANCE
    ymin = np.minimum(start.imag, end.imag) - GRAZING_DISTANCE
    ymax = np.maximum(start.imag, end.imag) + GRAZING_DISTANCE

    # Sweep in order of left edge; later segments overlap in x iff they start before this one ends
    order = np.argsort(xmin, kind='stable')
    sorted_xmin = xmin[order]
    records = []
    for position, i in enumerate(order):
        hi = np.searchsorted(sorted_xmin, xmax[i], side='right')
        candidates = order[position + 1:hi]
        candidates = candidates[(ymin[candidates] <= ymax[i]) & (ymax[candidates] >= ymin[i])]
        gap = np.abs(candidates - i)
        candidates = candidates[(gap != 1) & (gap != M - 1)]
        if candidates.size == 0:
            continue

        p0, p1 = start[i], end[i]
        q0, q1 = start[candidates], end[candidates]
        d1 = _cross(p1 - p0, q0 - p0)
        d2 = _cross(p1 - p0, q1 - p0)
        d3 = _cross(q1 - q0, p0 - q0)
        d4 = _cross(q1 - q0, p1 - q0)
        proper = (d1 * d2 < 0) & (d3 * d4 < 0)

        for j, dd3, dd4 in zip(candidates[proper], d3[proper], d4[proper]):
            t = dd3 / (dd3 - dd4)
            first, second = sorted((int(i), int(j)))
            records.append(JordanRecord(first, second, complex(p0 + t * (p1 - p0))))

        rest = candidates[~proper]
        if rest.size:
            q0, q1 = start[rest], end[rest]
            gaps = np.stack([
                _point_segment_distance(p0, q0, q1),
                _point_segment_distance(p1, q0, q1),
                _point_segment_distance(q0, p0, p1),
                _point_segment_distance(q1, p0, p1),
            ])
            near = gaps.min(axis=0) <= GRAZING_DISTANCE
            for j in rest[near]:
                first, second = sorted((int(i), int(j)))
                records.append(JordanRecord(first, second, complex(start[j]), grazing=True))

    records.sort(key=lambda record: (record.first, record.second))
    logger.debug("jordan test on %r: %d records", c.source, len(records))
    return records


class UnivalenceStatus(enum.Enum):
    CERTIFIED_NON_UNIVALENT = 'CertifiedNonUnivalent'
    PLAUSIBLY_UNIVALENT = 'PlausiblyUnivalent'


@dataclass(frozen=True)
class UnivalenceReport:
    status: UnivalenceStatus
    witness: tuple = None
    value: complex = None
    method: str = ''

    @property
    def certified(self):
        return self.status is UnivalenceStatus.CERTIFIED_NON_UNIVALENT

    def to_dict(self):
        payload = {'status': self.status.value, 'method': self.method}
        if self.witness is not None:
            payload['witness'] = [complex_pair(a) for a in self.witness]
            payload['value'] = complex_pair(self.value)
        return payload


def _root_witness(s, entry):
    """Two preimages of a multiply covered value, when root finding works"""
    if not s.is_polynomial():
        return None
    roots = interior_roots(s, entry.w)
    if roots.size < 2:
        return None
    scale = max(1.0, abs(entry.w))
    roots = [r for r in roots if abs(s.eval(r) - entry.w) <= 1e-8 * scale]
    if len(roots) < 2:
        return None
    a, b = max(combinations(roots, 2), key=lambda pair: abs(pair[0] - pair[1]))
    return complex(a), complex(b)


def univalence_probe(s, K, profile=None, M=DEFAULT_NODES):
    """Certify non-univalence from a winding >= 2 or a grid collision"""
    if profile is None:
        profile = winding_profile(s, K, M)
    multiple = [entry for entry in profile.entries if entry.n >= 2]
    if multiple:
        entry = _clearest([e for e in multiple if e.n == max(m.n for m in multiple)])
        witness = _root_witness(s, entry)
        if witness is not None:
            return UnivalenceReport(UnivalenceStatus.CERTIFIED_NON_UNIVALENT, witness, entry.w, 'winding')
        return UnivalenceReport(UnivalenceStatus.CERTIFIED_NON_UNIVALENT, (entry.a,), entry.w, 'winding')

    samples = polar_grid(K)
    values = s.eval(samples)
    tree = cKDTree(np.column_stack([values.real, values.imag]))
    pairs = sorted(tree.query_pairs(COLLISION_DISTANCE))
    if pairs:
        i, j = pairs[0]
        return UnivalenceReport(UnivalenceStatus.CERTIFIED_NON_UNIVALENT,
                                (complex(samples[i]), complex(samples[j])), complex(values[i]), 'collision')
    return UnivalenceReport(UnivalenceStatus.PLAUSIBLY_UNIVALENT, method='heuristic')


class SingleCoverStatus(enum.Enum):
    SINGLE_COVERS = 'SingleCovers'
    NO_SINGLE_SHEET = 'NoSingleSheetFound'


@dataclass(frozen=True)
class SingleCoverReport:
    status: SingleCoverStatus
    w: complex = None
    a: complex = None

    @property
    def found(self):
        return self.status is SingleCoverStatus.SINGLE_COVERS

    def to_dict(self):
        payload = {'status': self.status.value}
        if self.found:
            payload['w'] = complex_pair(self.w)
            payload['a'] = complex_pair(self.a)
        return payload


def single_cover_probe(s, p):
    """A winding-1 value marks an open single-covered region"""
    if not p.entries:
        raise EmptyProfile("profile is empty")
    single = [entry for entry in p.entries if entry.n == 1]
    if not single:
        return SingleCoverReport(SingleCoverStatus.NO_SINGLE_SHEET)
    entry = _clearest(single)
    return SingleCoverReport(SingleCoverStatus.SINGLE_COVERS, entry.w, entry.a)
