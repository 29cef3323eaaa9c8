"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Every tolerance is pinned here; nothing is calibrated at runtime.
"""

import time
from contextlib import contextmanager

import numpy as np

from rrqr import (
    EPS,
    FlopCounter,
    Xoshiro256pp,
    frobenius_norm,
    gen_bie_single_layer,
    gen_fast_decay,
    gen_kahan,
    gen_s_shape,
    factorization_errors,
    hqr_blk,
    hqr_unb,
    hqr_unb_formT,
    hqrp_blk,
    hqrp_unb,
    hqrrp_blk,
    jacobi_svd_values,
    truncation_errors,
)
from rrqr.householder import _unit_lower

from conftest import gauss, reflector_product
from test_randomized import fresh_sketch_state


@contextmanager
def criterion(num, name, limit_seconds):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num} ({name}): FAIL")
        raise
    elapsed = time.perf_counter() - start
    print(f"ACCEPTANCE {num} ({name}): PASS  [{elapsed:.1f}s]")
    assert elapsed < limit_seconds, f"criterion {num} took {elapsed:.1f}s"


SHAPES = [(64, 64), (200, 120), (120, 200), (257, 130)]


def _all_algorithms(seed):
    algos = [
        ("hqr", lambda a: hqr_unb(a)),
        ("hqr-blk-8", lambda a: hqr_blk(a, 8)),
        ("hqr-blk-32", lambda a: hqr_blk(a, 32)),
        ("hqrp", lambda a: hqrp_blk(a, 32)),
    ]
    for mode in ("basic", "downdate"):
        for b in (8, 32):
            for p in (0, 5):
                name = f"hqrrp-{mode}-b{b}-p{p}"
                algos.append(
                    (
                        name,
                        lambda a, b=b, p=p, mode=mode: hqrrp_blk(
                            a, b, Xoshiro256pp(seed + 1), p=p, mode=mode
                        ),
                    )
                )
    return algos


def test_criterion_1_factorization_validity():
    with criterion(1, "factorization validity", 60):
        for m, n in SHAPES:
            bound = 50 * max(m, n) * EPS
            for seed in range(20):
                a = gauss(seed * 101 + m + n, m, n)
                for name, run in _all_algorithms(seed):
                    f = run(a.copy(order="F"))
                    recon, orth = factorization_errors(a, f)
                    assert recon <= bound, (name, m, n, seed, recon, bound)
                    assert orth <= bound, (name, m, n, seed, orth, bound)


def test_criterion_2_ut_transform_identity():
    with criterion(2, "UT-transform identity", 10):
        for b in (1, 2, 3, 8):
            panel = gauss(500 + b, 12, b)
            t, taus = hqr_unb_formT(panel)
            u = _unit_lower(panel, b)
            block = np.eye(12) - u @ np.linalg.solve(t.T, u.T)
            explicit = reflector_product(panel, taus, b, 12)
            assert frobenius_norm(block - explicit) <= 1e-13


def test_criterion_3_oracle_equivalences():
    with criterion(3, "oracle equivalences", 30):
        for m, n, b in [(64, 64, 8), (128, 96, 16), (96, 128, 32), (100, 100, 7)]:
            a = gauss(m * 13 + n + b, m, n)
            scale = frobenius_norm(a)
            fu = hqr_unb(a.copy(order="F"))
            fb = hqr_blk(a.copy(order="F"), b)
            assert frobenius_norm(fu.packed - fb.packed) <= 1e-12 * scale
            p1 = hqrp_unb(a.copy(order="F"))
            pb = hqrp_blk(a.copy(order="F"), b)
            assert np.array_equal(p1.trail, pb.trail), (m, n, b)
            assert frobenius_norm(p1.packed - pb.packed) <= 1e-11 * scale


def test_criterion_4_weight_downdating():
    with criterion(4, "weight downdating", 30):
        for m, seed in [(200, 1), (200, 2), (250, 3)]:
            a = gauss(seed * 7, m, 200)
            worst = [0.0]

            def hook(k, packed, weights):
                tail = packed[k + 1 :, k + 1 :]
                exact = np.einsum("ij,ij->j", tail, tail)
                rel = np.abs(weights.v[k + 1 :] - exact) / np.maximum(
                    weights.v_orig[k + 1 :], 1e-300
                )
                if len(rel):
                    worst[0] = max(worst[0], float(np.max(rel)))

            hqrp_unb(a.copy(order="F"), step_hook=hook)
            assert worst[0] <= 1e-8, (m, seed, worst[0])


def test_criterion_5_sketch_downdating_identity():
    with criterion(5, "sketch downdating identity", 10):
        b, p, n = 16, 5, 256
        for seed in range(5):
            a0 = gauss(1000 + seed, n, n)
            bound = 1e-10 * (b + p) * frobenius_norm(a0)
            captured = {}
            errs = []

            def hook(st):
                if st.col_offset == 0:
                    captured["g0"] = st.g.copy()
                    return
                g_fresh, state = fresh_sketch_state(
                    a0, captured["g0"], st.panels, st.a, st.perm
                )
                j = st.col_offset
                errs.append(frobenius_norm(st.y - g_fresh[:, j:] @ state[j:, j:]))

            hqrrp_blk(
                a0.copy(order="F"),
                b,
                Xoshiro256pp(seed + 50),
                p=p,
                mode="downdate",
                loop_hook=hook,
            )
            assert len(errs) == n // b - 1
            assert max(errs) <= bound, (seed, max(errs), bound)


def test_criterion_6_quality_desk_scale():
    with criterion(6, "pivot quality, desk scale", 60):
        n, b, p, seed = 400, 50, 5, 0
        ks = list(range(b, n - b + 1, b))  # 50 .. 350
        matrices = [
            gen_fast_decay(n, Xoshiro256pp(seed))[0],
            gen_s_shape(n, Xoshiro256pp(seed))[0],
            gen_bie_single_layer(n),
        ]
        for idx, a in enumerate(matrices):
            classic = truncation_errors(a, hqrp_blk(a.copy(order="F"), b), ks)
            rand = truncation_errors(
                a,
                hqrrp_blk(a.copy(order="F"), b, Xoshiro256pp(seed + 1), p=p),
                ks,
            )
            ratio = rand.e_frob / classic.e_frob
            assert np.all(ratio <= 2.0), (f"matrix {idx + 1}", ratio.max())
        # Kahan counterexample at desk parameters
        nk = 128
        a = gen_kahan(nk, zeta=0.1 ** (1.0 / nk))
        kk = list(range(0, nk, 8))
        classic = truncation_errors(a, hqrp_blk(a.copy(order="F"), 16), kk)
        rand = truncation_errors(
            a, hqrrp_blk(a.copy(order="F"), 16, Xoshiro256pp(seed + 1), p=5), kk
        )
        ok = rand.e_frob <= 1.1 * classic.e_frob
        assert np.mean(ok) >= 0.9, (np.mean(ok), (rand.e_frob / classic.e_frob).max())


def test_criterion_7_eckart_young_floors():
    with criterion(7, "Eckart-Young floors", 120):
        n, b = 128, 16
        ks = list(range(0, n + 1, b))
        cases = []
        for gen in (gen_fast_decay, gen_s_shape):
            a, sig = gen(n, Xoshiro256pp(3))
            cases.append((a, sig))
        g = gauss(4, n, n)
        cases.append((g, jacobi_svd_values(g)))
        for a, sig in cases:
            for run in (
                lambda x: hqr_blk(x, b),
                lambda x: hqrp_blk(x, b),
                lambda x: hqrrp_blk(x, b, Xoshiro256pp(5), p=5, mode="basic"),
                lambda x: hqrrp_blk(x, b, Xoshiro256pp(5), p=5, mode="downdate"),
            ):
                rep = truncation_errors(
                    a, run(a.copy(order="F")), ks, with_spectral=True, sigmas=sig
                )
                assert np.all(rep.e_frob >= rep.sv_bound_frob * (1 - 1e-8))
                assert np.all(rep.e_spec >= rep.sv_bound_spec * (1 - 1e-8))


def test_criterion_8_flop_counts():
    with criterion(8, "flop counts", 10):
        n = 512
        budget = (4.0 / 3.0) * n**3
        a = gauss(6, n, n)
        fc = FlopCounter()
        hqr_blk(a.copy(order="F"), 32, fc)
        ratio_unpivoted = fc.count / budget
        assert 0.95 <= ratio_unpivoted <= 1.10, ratio_unpivoted
        fc = FlopCounter()
        hqrrp_blk(a.copy(order="F"), 32, Xoshiro256pp(7), p=5, mode="downdate", fc=fc)
        ratio_randomized = fc.count / budget
        assert 1.0 <= ratio_randomized <= 1.35, ratio_randomized


def test_criterion_9_diagonal_ordering():
    with criterion(9, "diagonal ordering", 60):
        n, b = 128, 16
        mats = [
            gen_fast_decay(n, Xoshiro256pp(8))[0],
            gen_s_shape(n, Xoshiro256pp(9))[0],
            gen_bie_single_layer(n),
            gen_kahan(n, zeta=0.1 ** (1.0 / n)),
        ]
        for idx, a in enumerate(mats):
            d = np.abs(np.diag(hqrp_blk(a.copy(order="F"), b).r_matrix()))
            assert np.all(d[:-1] >= d[1:] * (1 - 1e-12)), f"matrix {idx + 1}"
            dr = np.abs(
                np.diag(
                    hqrrp_blk(
                        a.copy(order="F"), b, Xoshiro256pp(10), p=5
                    ).r_matrix()
                )
            )
            for j in range(0, n, b):
                blk = dr[j : j + b]
                assert np.all(blk[:-1] >= blk[1:] * (1 - 1e-12)), (idx + 1, j)
