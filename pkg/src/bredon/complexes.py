"""Cell blocks and their cochain complexes with representation coefficients.

A block records the equivariant cell structure of one semidirect-product
building space over the cyclic point group: per degree, a list of cell
orbits each carrying the order of its isotropy group, plus the flattened
differential matrices.  The cochain module in degree d is the direct sum
of one restriction module per cell, and cohomology is computed degreewise
by exact integer linear algebra, together with the induced eta action on
every torsion-free cohomology group.

Built-in catalog:

``line-minus``
    The real line, point group of order 4 acting through the sign of the
    generator.  Two vertex orbits with full isotropy, one edge orbit with
    isotropy of order 2.

``plane-i``
    The plane, point group of order 4 acting by quarter rotation.  Three
    vertex orbits (isotropy orders 4, 4, 2), two free edge orbits, one
    free 2-cell orbit.

``point``
    A single fixed point with full isotropy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .intlinalg import (
    FgAbGroup,
    IntMatrix,
    kernel_lattice,
    smith_with_inverse,
    subquotient_with_action,
)
from .repring import (
    FpModule,
    LatticeModule,
    ModuleMap,
    PointGroup,
    direct_sum_modules,
    present_lattice,
    restriction_module,
)


@dataclass(frozen=True)
class GcwBlock:
    """Equivariant cell data of one building block.

    ``cells[d]`` lists the isotropy order of each degree-d cell orbit;
    ``differentials[d]`` is the flattened matrix from the degree-d cochain
    module to degree d+1.  Every cell contributes ``point_group.order``
    flat coordinates regardless of its isotropy order.
    """

    name: str
    point_group: PointGroup
    dimension: int
    cells: tuple
    differentials: tuple

    def cell_orders(self, degree: int) -> tuple:
        return self.cells[degree] if 0 <= degree <= self.dimension else ()


class CochainComplex:
    """A bounded complex of presented modules with equivariant maps."""

    def __init__(self, point_group: PointGroup, modules: Sequence[FpModule],
                 maps: Sequence[ModuleMap]):
        if len(maps) != max(len(modules) - 1, 0):
            raise ValueError("need exactly one map per consecutive degree pair")
        self.point_group = point_group
        self.modules = list(modules)
        self.maps = list(maps)

    @property
    def top(self) -> int:
        return len(self.modules) - 1

    def module(self, degree: int) -> Optional[FpModule]:
        if 0 <= degree <= self.top:
            return self.modules[degree]
        return None

    def flattened_ranks(self) -> list:
        return [m.flatten().free_rank for m in self.modules]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * r for d, r in enumerate(self.flattened_ranks()))

    def check_d_squared(self) -> None:
        for d in range(len(self.maps) - 1):
            composite = self.maps[d + 1].compose(self.maps[d])
            if not composite.matrix.is_zero() and not composite.is_zero_map():
                raise ValueError(f"d^2 is nonzero between degrees {d} and {d + 2}")


@dataclass
class CohomologyEntry:
    group: FgAbGroup
    module: Optional[FpModule]


class CohomologyTable:
    """Degree-indexed cohomology groups with optional module structure.

    The module slot is populated exactly when the group is torsion free;
    it then carries the eta action, ready for further tensoring.
    """

    def __init__(self, point_group: PointGroup, entries: dict):
        self.point_group = point_group
        self.entries = dict(entries)

    def degrees(self) -> list:
        return sorted(self.entries)

    def nonzero_degrees(self) -> list:
        return [d for d in self.degrees() if not self.entries[d].group.is_trivial]

    def group(self, degree: int) -> FgAbGroup:
        entry = self.entries.get(degree)
        return entry.group if entry else FgAbGroup.trivial()

    def module(self, degree: int) -> Optional[FpModule]:
        entry = self.entries.get(degree)
        return entry.module if entry else None

    def max_degree(self) -> int:
        return max(self.entries) if self.entries else -1

    def groups_equal(self, other: "CohomologyTable") -> bool:
        degrees = set(self.entries) | set(other.entries)
        return all(self.group(d) == other.group(d) for d in degrees)

    def total_rank(self) -> int:
        return sum(e.group.free_rank for e in self.entries.values())

    def __repr__(self) -> str:
        parts = ", ".join(f"H^{d}={self.entries[d].group}" for d in self.degrees())
        return f"CohomologyTable({parts})"


_CATALOG_DOC = {
    "line-minus": "line with sign action: vertices 4,4; edge 2",
    "plane-i": "plane with quarter-turn action: vertices 4,4,2; edges 1,1; face 1",
    "point": "single fixed point with full isotropy",
}


def _incidence_differential(n: int, n_source: int, n_target: int,
                            incidence: Sequence[dict]) -> IntMatrix:
    # One coefficient per (target cell, source cell); the same unit pattern
    # repeats across the eta powers because every coefficient map is a
    # coordinate projection between cyclic presentations.
    rows = [[0] * (n_source * n) for _ in range(n_target * n)]
    for e, spec in enumerate(incidence):
        for v, coeff in spec.items():
            for t in range(n):
                rows[e * n + t][v * n + t] = coeff
    return IntMatrix(n_target * n, n_source * n, rows)


def builtin_block(name: str) -> GcwBlock:
    """One of the catalog blocks: line-minus, plane-i, or point."""
    pg = PointGroup(4)
    n = pg.order
    if name == "line-minus":
        cells = ((4, 4), (2,))
        d0 = _incidence_differential(n, 2, 1, [{0: 1, 1: -1}])
        return GcwBlock(name, pg, 1, cells, (d0,))
    if name == "plane-i":
        cells = ((4, 4, 2), (1, 1), (1,))
        d0 = _incidence_differential(n, 3, 2, [{0: -1, 1: 1}, {1: -1, 2: 1}])
        d1 = _incidence_differential(n, 2, 1, [{}])
        return GcwBlock(name, pg, 2, cells, (d0, d1))
    if name == "point":
        return GcwBlock(name, pg, 0, ((4,),), ())
    raise KeyError(f"unknown block {name!r}; catalog: {sorted(_CATALOG_DOC)}")


def builtin_block_names() -> list:
    return sorted(_CATALOG_DOC)


def builtin_block_summary(name: str) -> str:
    return _CATALOG_DOC[name]


def block_module(block: GcwBlock, degree: int) -> FpModule:
    orders = block.cell_orders(degree)
    if not orders:
        return FpModule(block.point_group, 0, ())
    return direct_sum_modules(
        [restriction_module(block.point_group, m) for m in orders])


def bredon_cochain_complex(block: GcwBlock) -> CochainComplex:
    """Assemble and validate the cochain complex of a block."""
    report = validate_block(block)
    if not report.ok:
        raise ValueError("invalid block data: " + "; ".join(report.findings))
    modules = [block_module(block, d) for d in range(block.dimension + 1)]
    maps = [ModuleMap(modules[d], modules[d + 1], block.differentials[d])
            for d in range(block.dimension)]
    complex_ = CochainComplex(block.point_group, modules, maps)
    complex_.check_d_squared()
    return complex_


@dataclass
class BlockReport:
    """Findings of a block validation run; empty findings means a clean block."""

    block_name: str
    findings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings


def validate_block(block: GcwBlock) -> BlockReport:
    """Check divisor conditions, map shapes, equivariance and d^2 = 0."""
    report = BlockReport(block.name)
    n = block.point_group.order
    if len(block.cells) != block.dimension + 1:
        report.findings.append(
            f"expected cell lists for degrees 0..{block.dimension}")
        return report
    for d, orders in enumerate(block.cells):
        for m in orders:
            if m < 1 or n % m:
                report.findings.append(
                    f"degree {d}: isotropy order {m} does not divide {n}")
    if report.findings:
        return report
    if len(block.differentials) != block.dimension:
        report.findings.append(
            f"expected {block.dimension} differentials, "
            f"got {len(block.differentials)}")
        return report
    modules = [block_module(block, d) for d in range(block.dimension + 1)]
    maps = []
    for d in range(block.dimension):
        mat = block.differentials[d]
        if (mat.rows, mat.cols) != (modules[d + 1].flat_dim, modules[d].flat_dim):
            report.findings.append(
                f"degree {d}: differential is {mat.rows}x{mat.cols}, expected "
                f"{modules[d + 1].flat_dim}x{modules[d].flat_dim}")
            continue
        try:
            maps.append(ModuleMap(modules[d], modules[d + 1], mat))
        except ValueError as exc:
            report.findings.append(f"degree {d}: {exc}")
    if report.findings:
        return report
    for d in range(len(maps) - 1):
        composite = maps[d + 1].compose(maps[d])
        if not composite.matrix.is_zero() and not composite.is_zero_map():
            report.findings.append(
                f"d^2 is nonzero between degrees {d} and {d + 2}")
    return report


def _free_coordinates(module: FpModule):
    """Projection/section pair identifying the flatten with Z^rank.

    Requires the flattened group to be free; every cochain module built
    from restriction modules and their tensor products is.
    """
    dim = module.flat_dim
    rel = module.relation_columns()
    if rel.cols == 0:
        ident = IntMatrix.identity(dim)
        return ident, ident, dim
    diag, U, Uinv = smith_with_inverse(rel)
    r = sum(1 for d in diag if d)
    if any(d not in (0, 1) for d in diag):
        raise ValueError("cochain module with torsion is unsupported")
    P = U.submatrix(r, dim, 0, dim)
    S = Uinv.submatrix(0, dim, r, dim)
    return P, S, dim - r


def cohomology_table(C: CochainComplex) -> CohomologyTable:
    """Cohomology of a cochain complex, with module structure where free.

    Works in freed coordinates: each cochain module is identified with
    Z^rank once, the differentials and the eta action are transported,
    and each degree becomes a kernel-modulo-image computation over Z.
    """
    top = C.top
    coords = [_free_coordinates(m) for m in C.modules]
    freed_maps = []
    for d in range(top):
        P_next = coords[d + 1][0]
        S_here = coords[d][1]
        freed_maps.append(P_next * C.maps[d].matrix * S_here)
    freed_actions = []
    for d in range(top + 1):
        P, S, _ = coords[d]
        freed_actions.append(P * C.modules[d].shift_matrix() * S)

    entries = {}
    for d in range(top + 1):
        rank = coords[d][2]
        if rank == 0:
            entries[d] = CohomologyEntry(FgAbGroup.trivial(),
                                         FpModule(C.point_group, 0, ()))
            continue
        if d < top:
            cycles = kernel_lattice(freed_maps[d]).basis
        else:
            cycles = IntMatrix.identity(rank)
        if d > 0:
            boundaries = freed_maps[d - 1]
        else:
            boundaries = IntMatrix.zeros(rank, 0)
        group, action = subquotient_with_action(cycles, boundaries,
                                                freed_actions[d])
        module = None
        if group.is_trivial:
            module = FpModule(C.point_group, 0, ())
        elif action is not None:
            lm = LatticeModule(C.point_group, group.free_rank, action)
            module, _ = present_lattice(lm)
        entries[d] = CohomologyEntry(group, module)
    return CohomologyTable(C.point_group, entries)
