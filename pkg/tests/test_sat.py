from __future__ import annotations

import pytest

from conflictlens.errors import InputError, PreconditionError
from conflictlens.sat import (
    CdclSolver,
    CnfFormula,
    SolveStatus,
    VarPool,
    count_models,
    enumerate_models,
    load_dimacs,
    luby,
    minimize_core,
    read_dimacs,
    shrink_core,
    solve,
    write_dimacs,
)

PIGEONS_3_IN_2 = CnfFormula.of([
    (1, 2), (3, 4), (5, 6),
    (-1, -3), (-1, -5), (-3, -5),
    (-2, -4), (-2, -6), (-4, -6),
])


def _valuation(model) -> dict:
    return {abs(lit): lit > 0 for lit in model}


def test_luby_sequence() -> None:
    assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]
    with pytest.raises(ValueError):
        luby(0)


def test_satisfiable_formula_yields_a_model() -> None:
    f = CnfFormula.of([(1, 2), (-1, 3), (-3, -2), (2, 3)])
    result = solve(f)
    assert result.status is SolveStatus.SAT
    assert f.satisfied_by(_valuation(result.model))
    assert result.value(3) == (result.model[2] > 0)


def test_pigeonhole_is_unsatisfiable_with_empty_core() -> None:
    result = solve(PIGEONS_3_IN_2)
    assert not result.satisfiable
    assert result.core == ()
    with pytest.raises(PreconditionError):
        result.value(1)


def test_core_is_a_subset_of_the_failed_assumptions() -> None:
    f = CnfFormula.of([(-1, 2), (-2, -3), (4, 5)])
    result = solve(f, [1, 3, 4])
    assert not result.satisfiable
    assert set(result.core) <= {1, 3, 4}
    assert not solve(f, list(result.core)).satisfiable


def test_incremental_solver_keeps_learned_state_between_calls() -> None:
    solver = CdclSolver(3, seed=7)
    solver.add_clause([1, 2])
    solver.add_clause([-1, 3])
    assert solver.solve([-2])
    assert solver.model[0] > 0 and solver.model[2] > 0
    solver.add_clause([-3])
    assert not solver.solve([-2])
    assert set(solver.core) <= {-2}
    assert solver.solve()
    assert solver.model[1] > 0


def test_adding_the_empty_clause_makes_the_solver_unsatisfiable() -> None:
    solver = CdclSolver(1)
    assert not solver.add_clause([])
    assert not solver.solve([1])
    assert solver.core == []


def test_malformed_literals_are_rejected() -> None:
    with pytest.raises(InputError):
        CnfFormula.of([(1, 0)])
    with pytest.raises(InputError):
        CnfFormula(2, ((3,),))
    with pytest.raises(InputError):
        solve(CnfFormula.of([(1,)]), [2])
    with pytest.raises(InputError):
        CdclSolver(1).solve([True])


def test_minimize_core_drops_redundant_assumptions() -> None:
    f = CnfFormula.of([(-1, -2), (-3, 4)])
    core = minimize_core(f, [3, 1, 2, 4])
    assert sorted(core) == [1, 2]


def test_minimize_core_keeps_background_assumed() -> None:
    f = CnfFormula.of([(-1, -2, -3)])
    assert sorted(minimize_core(f, [1, 2], background=[3])) == [1, 2]


def test_shrink_core_requires_an_unsatisfiable_start() -> None:
    solver = CdclSolver(2)
    solver.add_clause([1, 2])
    with pytest.raises(PreconditionError):
        shrink_core(solver, [1])


def test_enumerate_models_blocks_previous_projections() -> None:
    f = CnfFormula.of([(1, 2)], num_vars=3)
    found = enumerate_models(f, [1, 2], limit=10)
    assert len(found) == 3
    assert {(m[1], m[2]) for m in found} == {(True, False), (False, True), (True, True)}
    assert count_models(f, [1, 2, 3]) == 6
    assert len(enumerate_models(f, [1, 2], limit=2)) == 2
    with pytest.raises(PreconditionError):
        enumerate_models(f, [1], limit=0)


def test_var_pool_names_only_problem_atoms() -> None:
    pool = VarPool()
    a = pool.var(("p", 0))
    assert pool.var(("p", 0)) == a
    aux = pool.aux()
    assert aux != a
    assert pool.key_of(aux) is None
    assert pool.lookup(("p", 1)) is None
    assert pool.named() == {("p", 0): a}


def test_dimacs_round_trip() -> None:
    text = "c example\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n"
    f = read_dimacs(text)
    assert f.num_vars == 3
    assert f.clauses == ((1, -2), (2, 3, -1))
    assert read_dimacs(write_dimacs(f)) == f


@pytest.mark.parametrize(
    "text",
    [
        "1 2 0\n",
        "p cnf 2 1\n1 2\n",
        "p cnf 2 2\n1 2 0\n",
        "p cnf x 1\n1 0\n",
        "p dnf 2 1\n1 0\n",
        "p cnf 2 1\n1 a 0\n",
        "p cnf 2 1\np cnf 2 1\n1 0\n",
        "p cnf 1 1\n2 0\n",
        "",
    ],
)
def test_malformed_dimacs_is_an_input_error(text: str) -> None:
    with pytest.raises(InputError):
        read_dimacs(text)


def test_load_dimacs_reports_missing_files(tmp_path) -> None:
    with pytest.raises(InputError):
        load_dimacs(tmp_path / "missing.cnf")
    path = tmp_path / "ok.cnf"
    path.write_text("p cnf 1 1\n1 0\n", encoding="utf-8")
    assert solve(load_dimacs(path)).satisfiable
