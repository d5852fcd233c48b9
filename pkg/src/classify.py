"""
Rule engine for the minimal commutant (MCP) and double commutant (DCP) questions.

Each rule reads measurements from curvegeom, factor and opspace and
concludes Yes or No for one property, tagged Certified (a finite
computation proves it) or Heuristic (sampling suggests it).
"""

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .curvegeom import (
    BoundaryCurve, critical_points, is_winding_constant, jordan_test, minimal_winding,
    single_cover_probe, univalence_probe, winding_number, winding_profile,
)
from .exceptions import ConstantSymbolError, InputError, MeasurementError
from .factor import bdu_crosscheck, bdu_factor, minimal_winding_property, power_factor
from .opspace import DensityWitness, density_witness
from .symbolcore import complex_pair, format_complex, format_real

logger = logging.getLogger(__name__)

INNER_TOL = 1e-8

CITATIONS = {
    'R1': "a minimal commutant forces a univalent symbol",
    'R2': "unequal boundary windings over the image rule out the double commutant property",
    'R3': "a single-covered region beside a multiply covered one rules out the double commutant property",
    'R4': "inner symbols (z^n, finite Blaschke products) have the double commutant property",
    'R5': "Walsh's theorem: polynomials are dense over a domain bounded by a Jordan curve",
    'R6': "Baker-Deddens-Ullman factorization phi = h(z^k) with h a weak-star generator",
    'R7': "minimal winding number property k(phi) = order(B)",
}


class Answer(enum.Enum):
    YES = 'Yes'
    NO = 'No'
    UNKNOWN = 'Unknown'


class Confidence(enum.Enum):
    CERTIFIED = 'Certified'
    HEURISTIC = 'Heuristic'


@dataclass(frozen=True)
class Conclusion:
    prop: str
    answer: Answer
    confidence: Confidence


@dataclass
class RuleFiring:
    rule_id: str
    evidence: dict
    conclusions: tuple = ()

    @property
    def cite(self):
        return CITATIONS[self.rule_id]

    def to_dict(self):
        return {'id': self.rule_id, 'cite': self.cite, 'evidence': self.evidence}


@dataclass
class Verdict:
    mcp: Answer
    dcp: Answer
    rules: list
    confidence: dict
    diagnostics: list = field(default_factory=list)
    label: str = ''

    def fired(self, rule_id):
        return any(rule.rule_id == rule_id for rule in self.rules)

    def evidence(self, rule_id):
        for rule in self.rules:
            if rule.rule_id == rule_id:
                return rule.evidence
        return None

    def to_dict(self):
        return {
            'mcp': self.mcp.value,
            'dcp': self.dcp.value,
            'rules': [rule.to_dict() for rule in self.rules],
            'confidence': {key: (value.value if value else None) for key, value in self.confidence.items()},
            'diagnostics': list(self.diagnostics),
        }


def _entry(w, n):
    return {'w': complex_pair(w), 'n': int(n)}


class SymbolClassifier:
    """Collects the measurements for one symbol and applies the rules in order"""

    def __init__(self, cfg=None):
        self.cfg = cfg if cfg is not None else RunConfig()
        self.diagnostics = []

    def _measure(self, name, compute):
        try:
            return compute()
        except (MeasurementError, InputError) as err:
            if isinstance(err, ConstantSymbolError):
                raise
            self.diagnostics.append(f"{name}: {type(err).__name__}: {err}")
            logger.debug("%s failed: %s", name, err)
            return None

    def _inner_order(self, s, curve):
        """Winding about 0 when |phi| = 1 on the circle, else None"""
        deviation = float(np.max(np.abs(np.abs(curve.nodes) - 1)))
        if deviation > INNER_TOL:
            return None, deviation
        return winding_number(curve, 0), deviation

    def _high_witness(self, s, curve, high):
        """Prefer a critical value: the branch point of the covering"""
        best = _entry(high.w, high.n)
        for c in critical_points(s):
            w = complex(s.eval(c))
            try:
                n = winding_number(curve, w)
            except MeasurementError:
                continue
            if n > best['n'] or (n == best['n'] and 'critical_point' not in best):
                best = dict(_entry(w, n), critical_point=complex_pair(c))
        return best

    def _density(self, s):
        # the configured dimension is capped by the truncation order
        N, m = min(self.cfg.witness_dim, s.order + 1), self.cfg.depth
        if s.is_polynomial() and s.degree() * m > N:
            m = max(N // max(s.degree(), 1), 1)
        return self._measure('density_witness', lambda: density_witness(s, N, m))

    def classify(self, s):
        if s.is_constant(self.cfg.noise_floor):
            raise ConstantSymbolError(f"symbol {s.label!r} is constant; the rules need a nonconstant symbol")
        self.diagnostics = []
        cfg = self.cfg
        rules = []

        curve = BoundaryCurve.from_symbol(s, cfg.nodes)
        profile = self._measure('winding_profile', lambda: winding_profile(s, cfg.grid, cfg.nodes))
        univalence = constant = single = None
        if profile is not None:
            univalence = self._measure('univalence_probe', lambda: univalence_probe(s, cfg.grid, profile, cfg.nodes))
            constant = is_winding_constant(profile)
            single = single_cover_probe(s, profile)

        # R1
        if univalence is not None and univalence.certified:
            rules.append(RuleFiring('R1', univalence.to_dict(),
                                    (Conclusion('mcp', Answer.NO, Confidence.CERTIFIED),)))

        # R2
        if constant is not None and not constant[0]:
            high, low = constant[1]
            witness = self._measure('critical_points', lambda: self._high_witness(s, curve, high))
            rules.append(RuleFiring('R2', {'high': witness or _entry(high.w, high.n), 'low': _entry(low.w, low.n)},
                                    (Conclusion('dcp', Answer.NO, Confidence.CERTIFIED),)))

        # R3
        if single is not None and single.found and any(rule.rule_id == 'R1' for rule in rules):
            evidence = {'single_cover': single.to_dict()}
            witness = self._density(s)
            if isinstance(witness, DensityWitness):
                evidence['density_witness'] = witness.to_dict()
            rules.append(RuleFiring('R3', evidence, (Conclusion('dcp', Answer.NO, Confidence.CERTIFIED),)))

        # R4
        inner = self._measure('inner_check', lambda: self._inner_order(s, curve))
        if inner is not None and inner[0] is not None:
            order, deviation = inner
            monomial = s.support(cfg.noise_floor).tolist() == [order]
            conclusions = [Conclusion('dcp', Answer.YES, Confidence.CERTIFIED)]
            if order == 1:
                conclusions.append(Conclusion('mcp', Answer.YES, Confidence.CERTIFIED))
            elif order >= 2:
                conclusions.append(Conclusion('mcp', Answer.NO, Confidence.CERTIFIED))
            rules.append(RuleFiring('R4', {'order': order, 'monomial': monomial, 'deviation': deviation},
                                    tuple(conclusions)))

        # R5
        plausible = univalence is not None and not univalence.certified
        if plausible:
            records = jordan_test(curve)
            if not records:
                rules.append(RuleFiring('R5', {'univalence': univalence.to_dict(), 'nodes': curve.size,
                                               'jordan_records': 0},
                                        (Conclusion('mcp', Answer.YES, Confidence.HEURISTIC),)))
            else:
                self.diagnostics.append(
                    f"jordan_test: {len(records)} record(s), first at {format_complex(records[0].point)}"
                    + (" (grazing)" if records[0].grazing else "")
                )

        # R6 and R7
        factorization = self._measure('bdu_factor', lambda: bdu_factor(s, cfg.noise_floor))
        if factorization is not None and factorization.k >= 2 and profile is not None:
            k, h = factorization.k, factorization.h
            check = self._measure('bdu_crosscheck', lambda: bdu_crosscheck(s, cfg.grid, profile, cfg.nodes))
            h_univalence = self._measure('univalence_probe[h]', lambda: univalence_probe(h, cfg.grid, M=cfg.nodes))
            if check is not None and check.agree and h_univalence is not None and not h_univalence.certified:
                h_records = jordan_test(BoundaryCurve.from_symbol(h, cfg.nodes))
                if not h_records:
                    rules.append(RuleFiring('R6', {'k': k, 'h': h.to_text(cfg.noise_floor),
                                                   'residual': factorization.residual, 'crosscheck': check.to_dict()},
                                            (Conclusion('dcp', Answer.YES, Confidence.HEURISTIC),)))
            report = self._measure('minimal_winding', lambda: minimal_winding_property(s, power_factor(k), profile))
            if report is not None:
                rules.append(RuleFiring('R7', dict(report.to_dict(), h=h.to_text(cfg.noise_floor))))

        verdict = self._resolve(rules)
        verdict.label = s.label
        logger.debug("verdict for %r: mcp=%s dcp=%s rules=%s", s.label, verdict.mcp.value, verdict.dcp.value,
                     [rule.rule_id for rule in rules])
        return verdict

    def _decide(self, prop, rules):
        conclusions = [(rule.rule_id, c) for rule in rules for c in rule.conclusions if c.prop == prop]
        certified = {c.answer for _, c in conclusions if c.confidence is Confidence.CERTIFIED}
        heuristic = {c.answer for _, c in conclusions if c.confidence is Confidence.HEURISTIC}
        if len(certified) > 1:
            sources = ', '.join(rule_id for rule_id, c in conclusions if c.confidence is Confidence.CERTIFIED)
            self.diagnostics.append(f"{prop}: certified conclusions conflict ({sources})")
            return Answer.UNKNOWN, None
        if certified:
            return certified.pop(), Confidence.CERTIFIED
        if len(heuristic) == 1:
            return heuristic.pop(), Confidence.HEURISTIC
        return Answer.UNKNOWN, None

    def _resolve(self, rules):
        mcp, mcp_conf = self._decide('mcp', rules)
        dcp, dcp_conf = self._decide('dcp', rules)

        # mcp = Yes implies dcp = Yes; dcp = No implies mcp = No
        if mcp is Answer.YES and dcp is Answer.UNKNOWN and mcp_conf is not None:
            dcp, dcp_conf = Answer.YES, mcp_conf
        if mcp is Answer.YES and dcp is Answer.NO:
            if mcp_conf is Confidence.CERTIFIED and dcp_conf is Confidence.CERTIFIED:
                self.diagnostics.append("certified mcp = Yes contradicts certified dcp = No")
                mcp, mcp_conf, dcp, dcp_conf = Answer.UNKNOWN, None, Answer.UNKNOWN, None
            elif dcp_conf is Confidence.CERTIFIED:
                mcp, mcp_conf = Answer.NO, Confidence.CERTIFIED
            else:
                dcp, dcp_conf = Answer.YES, mcp_conf

        return Verdict(mcp, dcp, rules, {'mcp': mcp_conf, 'dcp': dcp_conf}, list(self.diagnostics))


def classify(s, cfg=None):
    """MCP/DCP verdict for a nonconstant symbol"""
    return SymbolClassifier(cfg).classify(s)


def _describe(value):
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(x, float) for x in value):
        return format_complex(complex(*value))
    if isinstance(value, list):
        return '[' + ', '.join(_describe(x) for x in value) + ']'
    if isinstance(value, dict):
        return '{' + ', '.join(f"{key}: {_describe(value[key])}" for key in sorted(value)) + '}'
    return str(value)


def explain(v):
    """Plain-text report of a verdict"""
    def confidence(key):
        value = v.confidence.get(key)
        return f" ({value.value})" if value else ''

    lines = [
        f"symbol: {v.label}" if v.label else "symbol: (unlabelled)",
        f"minimal commutant: {v.mcp.value}{confidence('mcp')}",
        f"double commutant: {v.dcp.value}{confidence('dcp')}",
    ]
    for rule in v.rules:
        lines.append(f"{rule.rule_id}: {rule.cite}")
        evidence = rule.evidence
        if rule.rule_id == 'R2':
            for key in ('high', 'low'):
                lines.append(f"  winding {evidence[key]['n']} at w = {_describe(evidence[key]['w'])}")
        elif rule.rule_id in ('R6', 'R7'):
            lines.append(f"  k = {evidence['k']}, h = {evidence['h']}")
        for key in sorted(evidence):
            if rule.rule_id == 'R3' and key == 'density_witness':
                witness = evidence[key]
                lines.append(f"  density witness: m = {witness['m']}, rank = {witness['rank']}, "
                             f"max pairing = {format_real(witness['max_pairing'])}, "
                             f"separating h = {witness['separating_h']}, "
                             f"pairing = {format_real(witness['pairing'])}")
            else:
                lines.append(f"  {key}: {_describe(evidence[key])}")
    for diagnostic in v.diagnostics:
        lines.append(f"diagnostic: {diagnostic}")
    return '\n'.join(lines) + '\n'


@dataclass
class PowersReport:
    verdicts: list
    first_loss: int = None

    def to_dict(self):
        return {
            'powers': [{'p': p, 'verdict': verdict.to_dict()} for p, verdict in self.verdicts],
            'first_dcp_loss': self.first_loss,
        }


def classify_powers(s, p, cfg=None):
    """Classify phi, phi^2, ..., phi^p and find the first power losing the DCP"""
    if p < 1:
        raise ValueError(f"power count must be positive, got {p}")
    classifier = SymbolClassifier(cfg)
    verdicts = []
    first_loss = None
    for j in range(1, p + 1):
        power = (s ** j).relabel(f"({s.label})^{j}" if s.label else f"phi^{j}") if j > 1 else s
        verdict = classifier.classify(power)
        verdicts.append((j, verdict))
        if first_loss is None and verdict.dcp is Answer.NO:
            first_loss = j
    return PowersReport(verdicts, first_loss)
