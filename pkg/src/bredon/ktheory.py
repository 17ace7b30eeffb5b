"""Topological K-theory and K-homology from even-concentrated cohomology.

When the Bredon cohomology of the classifying space is concentrated in
even degrees, the Atiyah-Hirzebruch spectral sequence collapses and the
equivariant K-groups are the even and odd sums.  Dualizing with the
universal coefficient sequence gives Bredon homology and, through the
homological spectral sequence, equivariant K-homology.  Identifying the
K-homology of the classifying space with the K-theory of the reduced
group C*-algebra uses the Baum-Connes isomorphism, which is recorded as a
cited assumption and never computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from .complexes import CohomologyTable
from .intlinalg import FgAbGroup, hom_ext_z
from .pullback import PullbackRun, PullbackSpec, run_pullback

BAUM_CONNES_ASSUMPTION = (
    "K_*(C*_r(Gamma)) is identified with the equivariant K-homology of the "
    "classifying space for proper actions through the Baum-Connes assembly "
    "map, an isomorphism here by results of Higson-Kasparov (a-T-menability); "
    "recorded as an assumption, not computed."
)


@dataclass(frozen=True)
class KTheoryResult:
    """Equivariant K-theory in degrees 0 and 1.

    When ``collapsed`` is false the sums are only upper bounds read off
    the second page, never asserted as the actual K-groups.
    """

    k0: FgAbGroup
    k1: FgAbGroup
    collapsed: bool
    assumptions: tuple = ()


def ahss_collapse(H: CohomologyTable) -> KTheoryResult:
    """Collapse the Atiyah-Hirzebruch spectral sequence when possible.

    The sequence collapses exactly when all odd-degree entries vanish; in
    that case K^0 and K^1 are the even and odd sums.  Otherwise the sums
    are reported with ``collapsed = False`` as bounds only.
    """
    evens = [H.group(d) for d in H.degrees() if d % 2 == 0]
    odds = [H.group(d) for d in H.degrees() if d % 2 == 1]
    k0 = evens[0].direct_sum(*evens[1:]) if evens else FgAbGroup.trivial()
    k1 = odds[0].direct_sum(*odds[1:]) if odds else FgAbGroup.trivial()
    return KTheoryResult(k0, k1, collapsed=k1.is_trivial and all(
        g.is_trivial for g in odds))


def uct_dualize(H: CohomologyTable) -> dict:
    """Bredon homology from cohomology by the universal coefficient sequence.

    Degree-n homology is Hom(H^n, Z) plus Ext(H^(n+1), Z); for an
    all-free table this returns the table itself.  Torsion in degree
    n + 1 therefore shows up in homological degree n, possibly degree -1.
    """
    out = {}
    degrees = H.degrees()
    if not degrees:
        return out
    for n in range(min(degrees) - 1, max(degrees) + 1):
        hom, _ = hom_ext_z(H.group(n))
        _, ext = hom_ext_z(H.group(n + 1))
        value = hom.direct_sum(ext)
        if not value.is_trivial:
            out[n] = value
    return out


def homology_k_groups(homology: dict) -> KTheoryResult:
    """K-homology sums from a Bredon homology table (homological page)."""
    evens = [g for d, g in sorted(homology.items()) if d % 2 == 0]
    odds = [g for d, g in sorted(homology.items()) if d % 2 == 1]
    negatives = [d for d in homology if d < 0]
    k0 = evens[0].direct_sum(*evens[1:]) if evens else FgAbGroup.trivial()
    k1 = odds[0].direct_sum(*odds[1:]) if odds else FgAbGroup.trivial()
    collapsed = k1.is_trivial and not negatives
    return KTheoryResult(k0, k1, collapsed=collapsed)


@dataclass
class FullReport:
    """The end-to-end result of a pullback run.

    Carries the cohomology table, both K-theory results, the homology
    table, all computed certificates and the recorded assumption that
    identifies K-homology with the K-theory of the reduced C*-algebra.
    """

    spec: PullbackSpec
    run: PullbackRun
    cohomology: CohomologyTable
    k_theory: KTheoryResult
    homology: dict
    k_homology: KTheoryResult
    assumptions: tuple
    notes: list = field(default_factory=list)


def full_report(spec: PullbackSpec) -> FullReport:
    """Run the pipeline end to end and assemble the report.

    Certificate failures are recorded in the report rather than raised,
    so the report always describes exactly what was computed.
    """
    run = run_pullback(spec)
    H = run.final
    kt = ahss_collapse(H)
    kt = KTheoryResult(kt.k0, kt.k1, kt.collapsed,
                       assumptions=(BAUM_CONNES_ASSUMPTION,))
    homology = uct_dualize(H)
    kh = homology_k_groups(homology)
    kh = KTheoryResult(kh.k0, kh.k1, kh.collapsed,
                       assumptions=(BAUM_CONNES_ASSUMPTION,))
    notes = []
    if not kt.collapsed:
        notes.append("odd-degree cohomology present: K-theory sums are "
                     "second-page bounds, not computed K-groups")
    if not kh.collapsed:
        notes.append("homology is not concentrated in even nonnegative "
                     "degrees: K-homology sums are second-page bounds")
    for record in run.folds:
        if record.e2 is not None and not record.collapse_ok:
            p, q, g = record.collapse_failures[0]
            notes.append(f"fold {record.index} (+{record.block_name}): "
                         f"derived row p={p} nonzero at q={q} ({g}); the "
                         "tensor fold is not certified by collapse")
        if record.oracle is not None and not record.oracle.ok:
            d, t, c = record.oracle.mismatches()[0]
            notes.append(f"fold {record.index} (+{record.block_name}): "
                         f"product-complex oracle disagrees in degree {d}: "
                         f"tensor {t} vs complex {c}")
    for comparison in run.pair_oracles:
        if not comparison.ok:
            d, t, c = comparison.mismatches()[0]
            notes.append(f"{comparison.label}: oracle disagrees in degree "
                         f"{d}: tensor {t} vs complex {c}")
    return FullReport(spec, run, H, kt, homology, kh,
                      (BAUM_CONNES_ASSUMPTION,), notes)
