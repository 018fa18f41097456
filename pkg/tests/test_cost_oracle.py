"""Cost figures for the measured conversions, cross-checked against the
naive substitution oracle.

The expected step counts below were computed with the oracle first and
frozen; the oracle is re-run here so a drift in either reducer or in the
corpus shows up as a disagreement with the frozen row.
"""

import pytest

from cdle.corpus import synth_input_nf
from cdle.reduction import apply_and_count, normalize
from cdle.syntax import PApp

from oracle import oracle_normalize

# (conversion, input kind, [(n, beta_steps)...]) — oracle-computed, frozen
FROZEN = [
    ("v2l", "vec", [(8, 89), (16, 169), (32, 329)]),
    ("l2v", "list", [(8, 89), (16, 169), (32, 329)]),
    ("v2l!", "vec", [(8, 1), (16, 1), (32, 1)]),
    ("l2v!", "list", [(8, 1), (16, 1), (32, 1)]),
]


@pytest.mark.parametrize("name,kind,rows", FROZEN, ids=[r[0] for r in FROZEN])
def test_step_counts_match_oracle_and_frozen_values(name, kind, rows, checked_corpus):
    ck, _ = checked_corpus
    fn = normalize(ck.pure_env[name]).result
    for n, frozen_beta in rows:
        inp = synth_input_nf(ck, kind, n)
        machine = apply_and_count(fn, [inp])
        _, oracle_beta, oracle_eta = oracle_normalize(PApp(fn, inp), 1_000_000)
        assert machine.beta_steps == oracle_beta == frozen_beta, (
            f"{name}@{n}: machine={machine.beta_steps} oracle={oracle_beta} frozen={frozen_beta}"
        )
        assert machine.eta_steps == oracle_eta == 0


def test_linear_conversions_strictly_increase(checked_corpus):
    ck, _ = checked_corpus
    for name, kind in [("v2l", "vec"), ("l2v", "list")]:
        fn = normalize(ck.pure_env[name]).result
        steps = [
            apply_and_count(fn, [synth_input_nf(ck, kind, n)]).beta_steps
            for n in (8, 16, 32)
        ]
        assert steps[0] < steps[1] < steps[2]


def test_constant_conversions_identical_counts_up_to_512(checked_corpus):
    ck, _ = checked_corpus
    for name, kind in [("v2l!", "vec"), ("l2v!", "list")]:
        fn = normalize(ck.pure_env[name]).result
        steps = {
            apply_and_count(fn, [synth_input_nf(ck, kind, n)]).beta_steps
            for n in (8, 512)
        }
        assert steps == {1}
