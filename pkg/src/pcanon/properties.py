"""Structural checks on a computed p-canonical table."""

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

from ..algebra.hecke import HeckeAlgebra, HeckeElt
from ..algebra.laurent import V, V_INV
from ..utils.analysis import violations_frame
from .engine import PCanTable, expand_in_pcan

logger = logging.getLogger(__name__)

PROPERTIES = (
    "self_dual",
    "std_positive",
    "kl_positive",
    "inverse_symmetry",
    "descent_support",
    "structure_constants",
    "agrees_with_kl",
    "descent_lemma_left",
    "descent_lemma_right",
)


@dataclass
class PropertyReport:
    """Violations found on one table, as (property, element, detail) triples."""
    system: str
    prime: int
    checked: List[str] = field(default_factory=list)
    violations: List[Tuple[str, str, str]] = field(default_factory=list)

    def add(self, name: str, element: str, detail: str) -> None:
        self.violations.append((name, element, detail))

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "prime": self.prime,
            "checked": list(self.checked),
            "violations": [list(v) for v in self.violations],
        }

    def to_text(self) -> str:
        head = f"{self.system}, p = {self.prime}: {len(self.checked)} properties checked"
        if self.passed:
            return head + ", no violations"
        return head + "\n" + violations_frame(self.violations).to_string(index=False)


def _left_kl_s(hecke: HeckeAlgebra, s: int, h: HeckeElt) -> HeckeElt:
    # b_s h = H_s h + v h
    return hecke.left_mult_s(s, h) + h.scale(V)


def _right_kl_s(hecke: HeckeAlgebra, h: HeckeElt, s: int) -> HeckeElt:
    return hecke.right_mult_s(h, s) + h.scale(V)


def verify_properties(table: PCanTable, hecke: HeckeAlgebra = None) -> PropertyReport:
    """Run every property on every element of the table and collect violations."""
    system = table.system
    hecke = hecke or HeckeAlgebra(system)
    report = PropertyReport(system=system.name, prime=table.prime, checked=list(PROPERTIES))
    label = system.label

    for x in table.elements:
        pb = table.std_expansion[x]
        kl = table.kl_expansion[x]

        if hecke.bar(pb) != pb:
            report.add("self_dual", label(x), "bar(p b_x) != p b_x")

        for y, c in pb.items():
            if not c.is_nonnegative():
                report.add("std_positive", label(x), f"p h_{label(y)} = {c}")

        for y, c in kl.items():
            if not c.is_nonnegative() or not c.is_self_dual():
                report.add("kl_positive", label(x), f"p m_{label(y)} = {c}")
            if not system.bruhat_leq(y, x):
                report.add("kl_positive", label(x), f"kl_{label(y)} is not below x in Bruhat order")

        x_inv = system.inverse(x)
        inv = table.kl_expansion.get(x_inv)
        if inv is not None:
            for y, c in kl.items():
                if inv.coeff(system.inverse(y)) != c:
                    report.add("inverse_symmetry", label(x),
                               f"p m_{label(y)} != p m of the inverses")

        for side in ("left", "right"):
            dx = system.descents(x, side)
            for y in kl.terms:
                if not dx <= system.descents(y, side):
                    report.add("descent_support", label(x),
                               f"{side} descents of {label(x)} not contained in those of {label(y)}")

        # products with p b_s stay inside the table only below the length bound
        if x.length < table.maxlen:
            for s in range(system.rank):
                for side, product in (("left", _left_kl_s(hecke, s, pb)),
                                      ("right", _right_kl_s(hecke, pb, s))):
                    coeffs = expand_in_pcan(table, product)
                    for z, c in coeffs.items():
                        if not c.is_nonnegative() or not c.is_self_dual():
                            report.add("structure_constants", label(x),
                                       f"{side} by {system.generators[s]}: coefficient {c} at {label(z)}")

        for s in system.descents(x, "left"):
            if _left_kl_s(hecke, s, pb) != pb.scale(V + V_INV):
                report.add("descent_lemma_left", label(x), f"p b_{system.generators[s]} p b_x")
        for s in system.descents(x, "right"):
            if _right_kl_s(hecke, pb, s) != pb.scale(V + V_INV):
                report.add("descent_lemma_right", label(x), f"p b_x p b_{system.generators[s]}")

    if (table.prime == 0 or table.prime >= 7) and system.is_finite:
        for x in table.differences():
            report.add("agrees_with_kl", label(x), "p b_x != kl_x")

    logger.info("%s p=%d: %d property violations", system.name, table.prime, len(report.violations))
    return report
