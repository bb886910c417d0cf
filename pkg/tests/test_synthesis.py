"""Inversion: hierarchy/measure/utility recovery and the verified round trip."""
from __future__ import annotations

import random

from fractions import Fraction as F

import pytest

from conftest import build_m0, random_model
from test_axioms import _p0_defect, _p2_defect, flat2
from lexeu.acts import OutcomeSpace, compose, constant_act
from lexeu.errors import AxiomPrecheckFailed, IncompleteTable, Unrepresentable
from lexeu.events import Event, StateSpace
from lexeu.family import TableBackedFamily, derive_table
from lexeu.feasibility import fourier_motzkin_feasible, solve
from lexeu.model import GsleuModel, Level
from lexeu.preference import class_partition
from lexeu.synthesis import (
    _first_mismatch,
    _prize_constants,
    infer_hierarchy,
    infer_measure,
    infer_utility,
    measure_from_order,
    synthesize,
)

M0 = build_m0()
M0_TABLE = derive_table(M0)

# Kraft–Pratt–Seidenberg: each compared pair ties under the almost-additive
# weights (1,2,3,4,6), and this orientation of the ties extends to a monotone
# quasi-additive weak order on all 32 events, yet the strict system has no
# additive solution (the seven difference rows admit a vanishing positive
# combination).
KPS_ATOMS = ("a", "b", "c", "d", "e")
KPS_COMPARISONS = [
    ("c", ">", "ab"),
    ("d", ">", "ac"),
    ("ad", ">", "bc"),
    ("bd", ">", "e"),
    ("abc", ">", "e"),
    ("cd", ">", "ae"),
    ("be", ">", "acd"),
]


def restrict(table: TableBackedFamily, keep: dict) -> TableBackedFamily:
    return TableBackedFamily(
        table.space,
        table.outcome_space,
        keep,
        {
            m: tuple(
                tuple(n for n in tier if n in keep)
                for tier in t
                if any(n in keep for n in tier)
            )
            for m, t in table.tiers.items()
        },
        tuple(
            tuple(n for n in tier if n in keep)
            for tier in table.unconditional
            if any(n in keep for n in tier)
        ),
    )


def test_m0_round_trip_verified():
    result = synthesize(M0_TABLE)
    assert result.verified
    again = derive_table(result.model)
    assert again.tiers == M0_TABLE.tiers
    assert again.unconditional == M0_TABLE.unconditional
    assert result.diagnostics["classes"] == 3
    assert set(result.diagnostics["stages"]) == {1, 2, 3}
    for stage in result.diagnostics["stages"].values():
        assert {"measure_rows", "ranking_rows", "strategy", "retries"} <= set(stage)
    assert all(v == "Holds" for v in result.diagnostics["prechecks"].values())


def test_m0_hierarchy_matches_source_partition():
    assert infer_hierarchy(M0_TABLE) == class_partition(M0)
    assert infer_hierarchy(M0_TABLE, precheck=False) == class_partition(M0)


def test_single_level_table_gives_one_class():
    table = derive_table(flat2())
    part = infer_hierarchy(table)
    assert part.depth == 1
    assert set(part.supports[0].labels) == {"s1", "s2"}


def test_m0_frozen_measures():
    part = infer_hierarchy(M0_TABLE, precheck=False)
    assert infer_measure(M0_TABLE, 1, part) == {"s1": F(1, 2), "s2": F(1, 2)}
    assert infer_measure(M0_TABLE, 2, part) == {"s3": F(1)}
    assert infer_measure(M0_TABLE, 3, part) == {"s4": F(1)}


def test_m0_frozen_utilities():
    half = {"s1": F(1, 2), "s2": F(1, 2)}
    assert infer_utility(M0_TABLE, 1, half) == {"a": F(0), "b": F(1, 2), "c": F(1)}
    # a one-atom class orders the constants but pins nothing between the
    # extremes, so the midpoint of the admissible interval is reported
    assert infer_utility(M0_TABLE, 2, {"s3": F(1)}) == {
        "a": F(0),
        "b": F(1, 2),
        "c": F(1),
    }


def test_two_tier_class_utility_is_two_valued():
    space = StateSpace(("s1", "s2"))
    ospace = OutcomeSpace(("a", "b", "c"))
    level = Level.from_mappings(
        space, ospace, ("s1", "s2"),
        {"s1": F(1, 3), "s2": F(2, 3)},
        {"a": F(0), "b": F(1), "c": F(1)},
    )
    table = derive_table(GsleuModel(space, ospace, (level,)))
    part = infer_hierarchy(table, precheck=False)
    measure = infer_measure(table, 1, part)
    assert infer_utility(table, 1, measure) == {"a": F(0), "b": F(1), "c": F(1)}


def test_measure_from_order_basics():
    uniform, _ = measure_from_order(("x", "y", "z"), [])
    assert uniform == {"x": F(1, 3), "y": F(1, 3), "z": F(1, 3)}
    tilted, _ = measure_from_order(("x", "y"), [(("x",), "<", ("y",))])
    assert tilted["y"] > tilted["x"] > 0
    with pytest.raises(Unrepresentable):
        measure_from_order(("x", "y"), [(("x",), ">", ("x",))])


def test_kps_order_is_unrepresentable():
    with pytest.raises(Unrepresentable) as err:
        measure_from_order(KPS_ATOMS, KPS_COMPARISONS)
    certificate = err.value.certificate
    # normalization + five positivity rows + the seven strict comparisons
    assert len(certificate.constraints) == 13
    assert not solve(certificate).feasible
    assert not fourier_motzkin_feasible(certificate)


def test_kps_certificate_is_tight():
    # dropping the last comparison restores additive realizability
    measure, _ = measure_from_order(KPS_ATOMS, KPS_COMPARISONS[:-1])
    assert sum(measure.values()) == 1


def test_precheck_gate_blocks_bad_tables():
    broken = _p2_defect()
    with pytest.raises(AxiomPrecheckFailed) as err:
        infer_hierarchy(broken)
    assert any(r.axiom_id == "P2.5" for r in err.value.reports)
    with pytest.raises(AxiomPrecheckFailed):
        synthesize(broken)
    # reversing only the unconditional ranking passes the indexed checks
    # but still fails the gate for the full pipeline
    unconditional_defect = _p0_defect()
    infer_hierarchy(unconditional_defect)
    with pytest.raises(AxiomPrecheckFailed) as err:
        synthesize(unconditional_defect)
    assert any(r.axiom_id == "P0.5" for r in err.value.reports)


def test_missing_bet_act_is_reported():
    best, worst = _prize_constants(M0_TABLE)
    keep = {}
    for o in M0_TABLE.outcome_space.outcomes:
        c = constant_act(o, M0_TABLE.space, M0_TABLE.outcome_space)
        keep[M0_TABLE.name_of(c)] = c
    for mask in range(1, 1 << 4):
        if mask == 1:
            continue  # drop the bet on {s1} alone
        bet = compose(best, Event(M0_TABLE.space, mask), worst)
        keep[M0_TABLE.name_of(bet)] = bet
    keep[M0_TABLE.name_of(worst)] = worst
    with pytest.raises(IncompleteTable):
        synthesize(restrict(M0_TABLE, keep))


def test_partial_table_of_constants_and_bets_synthesizes():
    best, worst = _prize_constants(M0_TABLE)
    keep = {}
    for o in M0_TABLE.outcome_space.outcomes:
        c = constant_act(o, M0_TABLE.space, M0_TABLE.outcome_space)
        keep[M0_TABLE.name_of(c)] = c
    for mask in range(1 << 4):
        bet = compose(best, Event(M0_TABLE.space, mask), worst)
        keep[M0_TABLE.name_of(bet)] = bet
    result = synthesize(restrict(M0_TABLE, keep))
    assert result.verified
    # the restricted table constrains less, but what it does say is honored
    again = derive_table(result.model)
    for mask, tiers in restrict(M0_TABLE, keep).tiers.items():
        ranks = {n: i for i, tier in enumerate(again.tiers[mask]) for n in tier}
        got = tuple(
            tuple(n for n in tier if n in keep)
            for tier in again.tiers[mask]
            if any(n in keep for n in tier)
        )
        assert {n for tier in got for n in tier} == {n for tier in tiers for n in tier}


def test_interior_measure_can_need_a_vertex_retry():
    space = StateSpace(("s1", "s2"))
    ospace = OutcomeSpace(("a", "b", "c"))
    level = Level.from_mappings(
        space, ospace, ("s1", "s2"),
        {"s1": F(1, 4), "s2": F(3, 4)},
        {"a": F(0), "b": F(1, 2), "c": F(1)},
    )
    result = synthesize(derive_table(GsleuModel(space, ospace, (level,))))
    assert result.verified
    assert result.diagnostics["stages"][1]["strategy"].startswith("vertex")


def test_joint_parameter_scan_recovers_five_state_level():
    space = StateSpace(("s1", "s2", "s3", "s4", "s5"))
    ospace = OutcomeSpace(("lo", "md", "hi"))
    level = Level.from_mappings(
        space, ospace, ("s1", "s2", "s3", "s4", "s5"),
        {"s1": F(4, 15), "s2": F(7, 30), "s3": F(1, 10), "s4": F(4, 15), "s5": F(2, 15)},
        {"lo": F(0), "md": F(1, 10), "hi": F(1)},
    )
    result = synthesize(derive_table(GsleuModel(space, ospace, (level,))), precheck_budget=10_000)
    assert result.verified
    assert result.diagnostics["stages"][1]["strategy"] == "parametric(t=1/10)"
    assert result.model.levels[0].prob == level.prob
    assert result.model.levels[0].utility == level.utility


def test_mismatch_reporting():
    assert _first_mismatch(M0_TABLE, M0_TABLE) is None
    tampered = TableBackedFamily(
        M0_TABLE.space,
        M0_TABLE.outcome_space,
        dict(M0_TABLE.acts),
        {**M0_TABLE.tiers, 3: tuple(reversed(M0_TABLE.tiers[3]))},
        M0_TABLE.unconditional,
    )
    where, f, g = _first_mismatch(M0_TABLE, tampered)
    assert where is not None and where.mask == 3
    assert f in M0_TABLE.acts.values() and g in M0_TABLE.acts.values()


def test_random_round_trips():
    rng = random.Random(5)
    for _ in range(10):
        model = random_model(rng, n_min=2, n_max=4)
        result = synthesize(derive_table(model), precheck_budget=10_000)
        assert result.verified
