"""The tensor fold, the product-complex oracle, and the derived page."""

import pytest

from bredon.complexes import (
    CohomologyEntry,
    CohomologyTable,
    cohomology_table,
)
from bredon.intlinalg import FgAbGroup, IntMatrix, smith_diagonal
from bredon.pullback import (
    CollapseFailureError,
    PullbackSpec,
    TorsionObstructionError,
    compute_pullback_cohomology,
    em_e2,
    kunneth_tensor,
    product_complex,
    run_pullback,
)
from bredon.repring import quotient_by_ideal

VW_TABLE = {
    0: FgAbGroup(42, (2,) * 15),
    2: FgAbGroup(2, (2,) * 20 + (4, 4)),
    4: FgAbGroup(1, (2, 2, 2)),
}


def character_euler(complex_):
    """Euler characteristic split by rational character blocks.

    Returns (plus, minus, gauss) where the pieces count, per degree with
    sign, the dimensions of the eigenvalue-1 part, the eigenvalue minus-1
    part, and the remaining part (as dimension over the degree-two field)
    of the flattened modules.  Computed directly from ranks of shift - 1
    and shift + 1, independent of the tensor machinery.
    """
    from bredon.complexes import _free_coordinates

    plus = minus = gauss = 0
    for d in range(complex_.top + 1):
        module = complex_.modules[d]
        P, S, rank = _free_coordinates(module)
        if rank == 0:
            continue
        act = P * module.shift_matrix() * S
        ident = IntMatrix.identity(rank)
        d_plus = rank - sum(1 for x in smith_diagonal(act - ident) if x)
        d_minus = rank - sum(1 for x in smith_diagonal(act + ident) if x)
        d_gauss = (rank - d_plus - d_minus) // 2
        sign = -1 if d % 2 else 1
        plus += sign * d_plus
        minus += sign * d_minus
        gauss += sign * d_gauss
    return plus, minus, gauss


class TestProductComplex:
    def test_line_squared_ranks(self, line_complex):
        pc = product_complex(line_complex, line_complex)
        assert pc.flattened_ranks() == [16, 8, 2]
        assert pc.euler_characteristic() == 10

    def test_point_is_unit(self, line_complex, plane_complex, point_complex):
        for cx in (line_complex, plane_complex):
            pc = product_complex(cx, point_complex)
            assert pc.flattened_ranks() == cx.flattened_ranks()

    def test_character_euler_multiplicative(self, line_complex, plane_complex):
        cases = [
            (line_complex, line_complex),
            (line_complex, plane_complex),
            (plane_complex, plane_complex),
        ]
        for cx, cy in cases:
            px, mx, gx = character_euler(cx)
            py, my, gy = character_euler(cy)
            pc = product_complex(cx, cy)
            assert character_euler(pc) == (px * py, mx * my, gx * gy)

    def test_line_euler_blocks(self, line_complex, plane_complex):
        assert character_euler(line_complex) == (1, 1, 2)
        assert character_euler(plane_complex) == (2, 3, 2)

    def test_d_squared_validated(self, line_complex, plane_complex):
        pc = product_complex(line_complex, plane_complex)
        pc.check_d_squared()


class TestKunneth:
    def test_line_squared(self, line_table):
        A = kunneth_tensor(line_table, line_table)
        assert A.group(0) == FgAbGroup.free(10)
        assert all(A.group(d).is_trivial for d in A.degrees() if d != 0)

    def test_fold_two(self, line_table, plane_table):
        A = kunneth_tensor(line_table, line_table)
        B = kunneth_tensor(A, plane_table)
        assert B.group(0) == FgAbGroup(20, (2, 2, 2))
        assert B.group(2) == FgAbGroup(1, (2, 2, 2))
        M = B.module(0)
        assert quotient_by_ideal(M, 2).flatten() == FgAbGroup(4, (2,) * 16)
        assert quotient_by_ideal(M, 1).flatten() == FgAbGroup(1, (2,) * 10 + (4,))

    def test_tensor_chain_values(self, line_table, plane_table):
        A = kunneth_tensor(line_table, line_table)
        M = A.module(0)
        assert quotient_by_ideal(M, 2).flatten() == FgAbGroup(2, (2,) * 6)
        assert quotient_by_ideal(M, 1).flatten() == FgAbGroup(1, (2, 2, 2))

    def test_point_is_unit(self, line_table, plane_table, point_table):
        for table in (line_table, plane_table):
            out = kunneth_tensor(table, point_table)
            assert out.groups_equal(table)

    def test_associative_on_groups(self, line_table, plane_table):
        left = kunneth_tensor(kunneth_tensor(line_table, line_table),
                              plane_table)
        right = kunneth_tensor(line_table,
                               kunneth_tensor(line_table, plane_table))
        assert left.groups_equal(right)

    def test_torsion_obstruction(self, line_table, pg4):
        torsion_only = CohomologyTable(pg4, {
            0: CohomologyEntry(FgAbGroup(0, (4,)), None)})
        with pytest.raises(TorsionObstructionError, match="degree 0"):
            kunneth_tensor(torsion_only, line_table)


class TestOracle:
    def test_line_pair_exact(self, line_complex, line_table):
        pc = product_complex(line_complex, line_complex)
        ct = cohomology_table(pc)
        kt = kunneth_tensor(line_table, line_table)
        assert kt.groups_equal(ct)

    def test_free_ranks_agree_on_all_pairs(self, line_complex, plane_complex,
                                           line_table, plane_table):
        # rationalized consistency: the fold and the product complex agree
        # on free ranks in every degree, even where torsion differs
        pairs = [
            (line_complex, line_complex, line_table, line_table),
            (line_complex, plane_complex, line_table, plane_table),
            (plane_complex, plane_complex, plane_table, plane_table),
        ]
        for cx, cy, tx, ty in pairs:
            ct = cohomology_table(product_complex(cx, cy))
            kt = kunneth_tensor(tx, ty)
            degrees = set(ct.entries) | set(kt.entries)
            for d in degrees:
                assert ct.group(d).free_rank == kt.group(d).free_rank

    def test_mixed_pair_torsion_difference(self, line_complex, plane_complex,
                                           line_table, plane_table):
        ct = cohomology_table(product_complex(line_complex, plane_complex))
        kt = kunneth_tensor(line_table, plane_table)
        assert kt.group(0) == FgAbGroup(12, (2,))
        assert ct.group(0) == FgAbGroup.free(12)


class TestDerivedPage:
    def test_zero_row_matches_kunneth(self, line_table, plane_table):
        page = em_e2(line_table, plane_table, 1)
        fold = kunneth_tensor(line_table, plane_table)
        for d in fold.degrees():
            assert page.entry(0, d) == fold.group(d)

    def test_free_side_kills_higher_rows(self, line_table, point_table):
        page = em_e2(line_table, point_table, 2)
        assert page.rows_above_zero() == []
        page = em_e2(point_table, line_table, 2)
        assert page.rows_above_zero() == []

    def test_line_pair_obstruction(self, line_table):
        page = em_e2(line_table, line_table, 2)
        assert page.entry(0, 0) == FgAbGroup.free(10)
        assert page.entry(1, 0) == FgAbGroup(0, (2, 2))
        assert page.entry(2, 0).is_trivial

    def test_plane_pair_page(self, plane_table):
        page = em_e2(plane_table, plane_table, 2)
        assert page.entry(0, 0) == FgAbGroup.free(18)
        assert page.entry(0, 2) == FgAbGroup(2, (2, 2, 4, 4))
        assert page.entry(0, 4) == FgAbGroup.free(1)
        assert page.entry(1, 0) == FgAbGroup(0, (2, 2, 4, 4))


class TestPipeline:
    def test_single_line(self, pg4, line_block):
        table = compute_pullback_cohomology(PullbackSpec(pg4, (line_block,)))
        assert table.group(0) == FgAbGroup.free(6)

    def test_point_squared(self, pg4, point_block):
        table = compute_pullback_cohomology(
            PullbackSpec(pg4, (point_block, point_block)))
        assert table.group(0) == FgAbGroup.free(4)

    def test_vafa_witten_fold(self, pg4, line_block, plane_block):
        spec = PullbackSpec(pg4, (line_block, line_block,
                                  plane_block, plane_block))
        table = compute_pullback_cohomology(spec)
        for d in table.degrees():
            assert table.group(d) == VW_TABLE.get(d, FgAbGroup.trivial())

    def test_fold_order_matches_reversal(self, pg4, line_block, plane_block):
        blocks = (line_block, line_block, plane_block, plane_block)
        fwd = compute_pullback_cohomology(PullbackSpec(pg4, blocks))
        rev = compute_pullback_cohomology(PullbackSpec(pg4, blocks[::-1]))
        assert fwd.groups_equal(rev)

    def test_strict_collapse_failure(self, pg4, line_block):
        spec = PullbackSpec(pg4, (line_block, line_block), tor_depth=1)
        with pytest.raises(CollapseFailureError, match="fold 1"):
            compute_pullback_cohomology(spec)

    def test_strict_oracle_success(self, pg4, line_block):
        # the line pair is the one fold whose oracle holds integrally
        spec = PullbackSpec(pg4, (line_block, line_block), oracle_check=True,
                            full_product_oracle=True)
        table = compute_pullback_cohomology(spec)
        assert table.group(0) == FgAbGroup.free(10)

    def test_strict_oracle_failure(self, pg4, line_block, plane_block):
        from bredon.pullback import OracleMismatchError

        spec = PullbackSpec(pg4, (line_block, plane_block), oracle_check=True)
        with pytest.raises(OracleMismatchError, match="degree 0"):
            compute_pullback_cohomology(spec)

    def test_full_oracle_records_line_pair(self, pg4, line_block):
        spec = PullbackSpec(pg4, (line_block, line_block),
                            full_product_oracle=True)
        run = run_pullback(spec)
        assert run.folds[0].oracle is not None
        assert run.folds[0].oracle.ok

    def test_full_oracle_vafa_witten_ranks(self, pg4, line_block, plane_block):
        spec = PullbackSpec(pg4, (line_block, line_block,
                                  plane_block, plane_block),
                            full_product_oracle=True)
        run = run_pullback(spec)
        last = run.folds[-1].oracle
        assert last is not None
        assert last.ranks_ok
        # the accumulated product complex has free cohomology
        complex_side = dict(zip(last.degrees, last.complex_groups))
        assert complex_side[0] == FgAbGroup.free(42)
        assert complex_side[2] == FgAbGroup.free(2)
        assert complex_side[4] == FgAbGroup.free(1)

    def test_at_least_one_block_required(self, pg4):
        with pytest.raises(ValueError):
            PullbackSpec(pg4, ())
