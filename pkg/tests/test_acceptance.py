"""Acceptance criteria 1-10, each run over the default configurations.

Every criterion prints one ``PASS``/``FAIL`` line with its worst residual and total
wall time, then asserts both the tolerances and the runtime budget.
"""

import time

import numpy as np

from fockweyl import verify as v
from fockweyl.verify import Config, default_quad_order

SEED = 20240611

_alpha_rng = np.random.default_rng(SEED)
CONFIGS = [
    Config(lam=1.0, n=1, m=1, alpha=_alpha_rng.uniform(-1, 1, (1, 1)).tolist(), beta=[0.0], seed=SEED),
    Config(lam=0.7, n=2, m=2, alpha=_alpha_rng.uniform(-1, 1, (2, 2)).tolist(), beta=[0.4, -0.2], seed=SEED),
    Config(lam=2.0, n=1, m=2, alpha=_alpha_rng.uniform(-1, 1, (2, 1)).tolist(), beta=[0.0, 0.0], seed=SEED),
]


def _planar(cfg):
    return max(cfg.quad_order, default_quad_order(1))


def _evaluate(criterion, parts, budget, capsys):
    """Run ``parts`` over every config and report.

    ``parts(cfg, rng)`` returns ``[(label, residual, tolerance), ...]``.
    """
    rows = []
    t0 = time.perf_counter()
    for k, cfg in enumerate(CONFIGS):
        rng = np.random.default_rng([SEED, criterion, k])
        for label, resid, tol in parts(cfg, rng):
            rows.append((f"lam={cfg.lam} n={cfg.n} m={cfg.m} {label}", float(resid), tol))
    elapsed = time.perf_counter() - t0
    bad = [r for r in rows if not r[1] <= r[2]]
    ok = not bad and elapsed < budget
    worst = max(rows, key=lambda r: r[1] / r[2])
    with capsys.disabled():
        print(
            f"\ncriterion {criterion:2d}: {'PASS' if ok else 'FAIL'}"
            f"  worst {worst[1]:.2e} (tol {worst[2]:.0e}, {worst[0]})"
            f"  time {elapsed:.1f}s (< {budget}s)"
        )
    assert not bad, bad
    assert elapsed < budget


def test_criterion_01_exp_homomorphism(capsys):
    def parts(cfg, rng):
        _, r = v.check_exp_homomorphism(cfg.ws, rng, samples=200)
        return [("exp", r, 1e-12)]

    _evaluate(1, parts, 1.0, capsys)


def test_criterion_02_kernel_homomorphism(capsys):
    def parts(cfg, rng):
        _, r = v.check_pi_homomorphism(cfg.ws, rng, samples=200)
        return [("pi(g)pi(g')", r, 1e-10)]

    _evaluate(2, parts, 5.0, capsys)


def test_criterion_03_gaussian_lemma(capsys):
    def parts(cfg, rng):
        _, r = v.check_gaussian_lemma(cfg.ws, rng, samples=50, order=default_quad_order(cfg.n))
        return [("lemma", r, 1e-8 if cfg.n == 1 else 1e-7)]

    _evaluate(3, parts, 60.0, capsys)


def test_criterion_04_weyl0_on_pi(capsys):
    def parts(cfg, rng):
        (_, a), (_, b), (_, c) = v.check_weyl0_pi_forms(cfg.ws, rng, samples=100, order=_planar(cfg))
        return [("trace-vs-closed", a, 1e-10), ("closed-forms", b, 1e-12), ("integral-vs-closed", c, 1e-7)]

    _evaluate(4, parts, 120.0, capsys)


def test_criterion_05_weyl0_Apq(capsys):
    def parts(cfg, rng):
        _, r = v.check_weyl0_Apq(cfg.ws, rng, max_degree=3)
        return [("A_pq", r, 1e-8)]

    _evaluate(5, parts, 30.0, capsys)


def test_criterion_06_covariance(capsys):
    def parts(cfg, rng):
        (_, a), (_, b) = v.check_covariance(cfg.ws, rng, samples=50)
        return [("berezin", a, 1e-9), ("weyl0", b, 1e-9)]

    _evaluate(6, parts, 10.0, capsys)


def test_criterion_07_stratonovich_weyl(capsys):
    def parts(cfg, rng):
        _, u = v.check_unit(cfg.ws, rng)
        _, r = v.check_reality(cfg.ws, rng)
        _, t = v.check_traciality(cfg.ws, rng, samples=20, order=cfg.quad_order)
        return [("unit", u, 1e-12), ("reality", r, 1e-12), ("traciality", t, 1e-7)]

    _evaluate(7, parts, 60.0, capsys)


def test_criterion_08_psi_map(capsys):
    def parts(cfg, rng):
        _, p = v.check_psi_pairing(cfg.ws, rng)
        _, e = v.check_psi_equivariance(cfg.ws, rng, samples=200)
        return [("pairing", p, 1e-12), ("equivariance", e, 1e-9)]

    _evaluate(8, parts, 5.0, capsys)


def test_criterion_09_schrodinger_model(capsys):
    def parts(cfg, rng):
        _, m = v.check_mehler_vs_oracle(cfg.ws, rng, samples=20, points=10, order=_planar(cfg))
        _, h = v.check_hermite_eigen(cfg.ws, rng)
        _, p = v.check_pi_prime_vs_oracle(cfg.ws, rng, samples=20, points=10, order=_planar(cfg))
        return [("mehler", m, 1e-6), ("hermite", h, 1e-7), ("pi-prime", p, 1e-6)]

    _evaluate(9, parts, 120.0, capsys)


def test_criterion_10_star_engine(capsys):
    def parts(cfg, rng):
        ws = cfg.ws
        _, assoc = v.check_moyal_associativity(ws, rng, samples=100, degree=4)
        _, hom = v.check_moyal_weyl(ws, rng, samples=100, degree=4)
        _, w1 = v.check_weyl1_of_weyl_quantization(ws, rng)
        _, gs = v.check_gaussian_star_series(ws, rng, total_degree=6)
        _, tay = v.check_star_exp_taylor(ws, rng, order=8)
        _, quad = v.check_star_exp_quadratic(ws, rng)
        return [
            ("moyal-assoc", assoc, 1e-12),
            ("moyal-weyl", hom, 1e-12),
            ("weyl1-weyl", w1, 1e-10),
            ("gaussian-star", gs, 1e-10),
            ("star-exp-taylor", tay, 1e-9),
            ("star-exp-quadratic", quad, 1e-12),
        ]

    _evaluate(10, parts, 60.0, capsys)


def test_configs_cover_the_default_grid():
    assert {c.lam for c in CONFIGS} == {0.7, 1.0, 2.0}
    assert {c.n for c in CONFIGS} == {1, 2}
    assert {c.m for c in CONFIGS} == {1, 2}
    assert any(np.any(c.beta) for c in CONFIGS)
    assert any(not np.any(c.beta) for c in CONFIGS)
    assert all(np.all(np.abs(c.alpha) <= 1) for c in CONFIGS)
