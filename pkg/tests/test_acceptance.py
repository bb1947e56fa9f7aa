"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Lines are collected in ``RESULTS`` and echoed in pytest's terminal summary
(see ``conftest.py``); running this file directly prints them as well.
"""

import csv
import io
import json
import math
import time

import numpy as np
import pytest

import oracles
from panfuse.cli import main
from panfuse.dataset import SceneSpec, make_wald_triple
from panfuse.fusion import (
    dwt2,
    fit_pca,
    fuse,
    fuse_brovey,
    fuse_cascade,
    fuse_ihs,
    fuse_pca,
    idwt2,
    match_moments,
    max_levels,
    pca_forward,
    pca_inverse,
)
from panfuse.fusion.pca import band_covariance
from panfuse.metrics import (
    MetricConfig,
    band_ssim,
    edge_preservation,
    evaluate,
    psnr,
    quality_index,
    resolution_enhancement_factor,
    rmse,
    sam,
    sid,
    spectral_content_preservation,
    ssim,
)
from panfuse.preprocess import resample
from panfuse.raster import FusionInputs, Raster, make_raster, to_intensity

RESULTS = []


def record(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def _triple(bands=4):
    return make_wald_triple(SceneSpec(bands=bands), ratio=2)


def _upsampled(t):
    return resample(t.ms_low, t.ground_truth.width, t.ground_truth.height, "bilinear")


def test_01_identity_metric_suite():
    t0 = time.perf_counter()
    t = _triple()
    gt = t.ground_truth
    rep = evaluate(gt, t.ms_low, t.pan, 2, gt)
    doc = rep.to_dict()
    raw = rep.raw
    dt = time.perf_counter() - t0
    checks = {
        "sam": abs(raw["sam"]) <= 1e-9,
        "sid": abs(raw["sid"]) <= 1e-9,
        "rmse": abs(raw["rmse"]) <= 1e-9,
        "ssim": abs(raw["ssim"] - 1) <= 1e-9,
        "edge": abs(raw["edge"] - 1) <= 1e-9,
        "esr": abs(raw["esr"] - 1) <= 1e-9,
        "psnr": doc["psnr"] == "inf",
        "time": dt < 5,
    }
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    record(1, ok, f"identity suite on seeded triple ({dt:.2f}s){' failed: ' + ','.join(failed) if failed else ''}")
    assert ok, failed


def test_02_perfect_reconstruction():
    t0 = time.perf_counter()
    g = np.random.default_rng(2)
    worst = 0.0
    for _ in range(200):
        h, w = (int(v) for v in g.integers(5, 65, size=2))
        bands = int(g.integers(1, 4))
        levels = min(int(g.integers(1, 4)), max_levels(w, h))
        x = Raster(g.normal(0, 100, size=(bands, h, w)))
        back = idwt2(dwt2(x, levels))
        assert back.shape == x.shape
        worst = max(worst, float(np.max(np.abs(back.data - x.data)) / np.max(np.abs(x.data))))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and dt < 10
    record(2, ok, f"idwt2(dwt2(x)) on 200 rasters, worst rel err {worst:.2e} ({dt:.2f}s)")
    assert ok


def test_03_pca_contract():
    t0 = time.perf_counter()
    g = np.random.default_rng(3)
    worst_rt = worst_orth = worst_trace = 0.0
    for _ in range(20):
        bands = int(g.integers(2, 7))
        mix = g.normal(size=(bands, bands))
        ms = Raster(np.einsum("ij,jhw->ihw", mix, g.uniform(0, 100, size=(bands, 16, 16))))
        model = fit_pca(ms)
        back = pca_inverse(pca_forward(ms, model), model)
        worst_rt = max(worst_rt, float(np.max(np.abs(back.data - ms.data)) / np.max(np.abs(ms.data))))
        gram = model.components @ model.components.T
        worst_orth = max(worst_orth, float(np.max(np.abs(gram - np.eye(bands)))))
        _, cov = band_covariance(ms)
        worst_trace = max(worst_trace, abs(math.fsum(model.eigenvalues) - np.trace(cov)) / np.trace(cov))
    two = fit_pca(make_raster(4, 1, 2, [1, 2, 3, 4, 1, 2, 3, 4]))
    s = 1 / math.sqrt(2)
    first_ok = float(np.max(np.abs(two.components[0] - [s, s]))) <= 1e-9
    dt = time.perf_counter() - t0
    ok = max(worst_rt, worst_orth, worst_trace) <= 1e-9 and first_ok and dt < 5
    record(3, ok, f"PCA round-trip {worst_rt:.1e}, orthonormality {worst_orth:.1e}, "
                  f"trace {worst_trace:.1e}, closed-form axis {'ok' if first_ok else 'wrong'} ({dt:.2f}s)")
    assert ok


def test_04_formula_fidelity():
    g = np.random.default_rng(4)
    brovey_ok = True
    ihs_err = pca_err = 0.0
    for _ in range(10):
        ms = Raster(g.uniform(1, 255, size=(3, 9, 11)))
        pan = Raster(g.uniform(1, 255, size=(1, 9, 11)))
        inp = FusionInputs(ms, pan, 2)
        brovey_ok &= fuse_brovey(inp).data.tobytes() == _brovey_loop(ms.data, pan.data).tobytes()
        target = match_moments(pan, to_intensity(ms)).data
        ihs_err = max(ihs_err, float(np.max(np.abs(to_intensity(fuse_ihs(inp)).data - target))))
        zero = FusionInputs(ms, Raster(np.zeros((1, 9, 11))), 2)
        lit = fuse_pca(zero, mode="paper_literal")
        pca_err = max(pca_err, float(np.max(np.abs(lit.data - pca_forward(ms, fit_pca(ms)).data))))
    ok = brovey_ok and ihs_err <= 1e-12 and pca_err <= 1e-12
    record(4, ok, f"Brovey bit-exact {'yes' if brovey_ok else 'no'}, IHS intensity err {ihs_err:.1e}, "
                  f"PCA literal err {pca_err:.1e}")
    assert ok


def _brovey_loop(ms, pan):
    B, H, W = ms.shape
    total = 0.0
    for y in range(H):
        for x in range(W):
            total += pan[0][y][x]
    mp = total / (H * W)
    out = np.empty_like(ms)
    for b in range(B):
        for y in range(H):
            for x in range(W):
                out[b][y][x] = ms[b][y][x] * (pan[0][y][x] / mp)
    return out


def test_05_oracle_equivalence():
    t0 = time.perf_counter()
    g = np.random.default_rng(5)
    worst = {k: 0.0 for k in ("sam", "sid", "scp", "ssim", "edge", "rmse", "psnr")}
    for _ in range(50):
        a = Raster(g.uniform(0, 255, size=(3, 16, 16)))
        b = Raster(g.uniform(0, 255, size=(3, 16, 16)))
        ms = Raster(g.uniform(0, 255, size=(3, 8, 8)))
        al, bl, msl = a.data.tolist(), b.data.tolist(), ms.data.tolist()
        pairs = {
            "sam": (sam(a, b), oracles.sam(al, bl)),
            "sid": (sid(a, b), oracles.sid(al, bl)),
            "scp": (spectral_content_preservation(a, ms, 2), oracles.scp(al, msl, 2)),
            "ssim": (ssim(a.band(0), b.band(0)), oracles.ssim(al[0], bl[0])),
            "edge": (edge_preservation(a.band(1), b.band(1)), oracles.edge(al[1], bl[1])),
            "rmse": (rmse(a, b), oracles.rmse(al, bl)),
            "psnr": (psnr(a, b), oracles.psnr(al, bl)),
        }
        for k, (got, exp) in pairs.items():
            worst[k] = max(worst[k], abs(got - exp))
    dt = time.perf_counter() - t0
    ok = max(worst.values()) <= 1e-9 and dt < 10
    record(5, ok, "max |impl - oracle|: " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f" ({dt:.2f}s)")
    assert ok


def test_06_fusion_beats_upsampling():
    t0 = time.perf_counter()
    t4, t3 = _triple(4), _triple(3)
    lines, ok = [], True
    for tag, t in (("brovey", t4), ("pca", t4), ("wavelet", t4), ("ihs", t3)):
        up = _upsampled(t)
        base = band_ssim(up, t.ground_truth)
        val = band_ssim(fuse(FusionInputs(up, t.pan, 2), tag), t.ground_truth)
        good = val >= base
        ok &= good
        lines.append(f"{tag} {val:.4f}{'>=' if good else '<'}{base:.4f}")
    dt = time.perf_counter() - t0
    ok &= dt < 30
    record(6, ok, "SSIM vs GT, fused vs bilinear: " + "; ".join(lines) + f" ({dt:.2f}s)")
    assert ok


def test_07_resolution_enhancement_factor():
    t0 = time.perf_counter()
    t = _triple()
    up = _upsampled(t)
    fused = fuse(FusionInputs(up, t.pan, 2), "wavelet")
    ui = to_intensity(up)
    ref_w = resolution_enhancement_factor(to_intensity(fused), ui)
    ref_up = resolution_enhancement_factor(ui, ui)
    dt = time.perf_counter() - t0
    ok = 1.3 <= ref_w <= 2.4 and abs(ref_up - 1) <= 1e-9 and dt < 10
    record(7, ok, f"REF wavelet {ref_w:.4f} in [1.3, 2.4], REF upsampled {ref_up:.12f} ({dt:.2f}s)")
    assert ok


def test_08_noise_monotonicity():
    t = _triple()
    gt = t.ground_truth
    sams, ssims = [], []
    for i, frac in enumerate((0.01, 0.02, 0.04)):
        noise = np.random.default_rng(800 + i).normal(0.0, frac * gt.span, size=gt.shape)
        noisy = gt.with_data(gt.data + noise)
        sams.append(sam(noisy, gt))
        ssims.append(band_ssim(noisy, gt))
    ok = sams[0] < sams[1] < sams[2] and ssims[0] > ssims[1] > ssims[2]
    record(8, ok, "sam " + " < ".join(f"{v:.5f}" for v in sams) + "; ssim " + " > ".join(f"{v:.5f}" for v in ssims))
    assert ok


def test_09_quality_index_contract():
    g = np.random.default_rng(9)
    in_range = True
    one_hot_err = 0.0
    for _ in range(200):
        raw = {"sam": g.uniform(0, 3.2), "sid": g.uniform(0, 5), "scp": g.uniform(-1, 1),
               "ssim": g.uniform(-1, 1), "edge": g.uniform(-1, 1), "esr": g.uniform(0, 1.5), "ref": g.uniform(0, 4)}
        rep = quality_index(raw, ratio=2)
        in_range &= 0.0 <= rep.quality_index <= 1.0
        for k in raw:
            one = quality_index(raw, MetricConfig(weights={k: 1.0}), ratio=2)
            one_hot_err = max(one_hot_err, abs(one.quality_index - one.normalized[k]))
    hand = quality_index({"sam": math.pi / 4, "ssim": 0.8}, MetricConfig(weights={"sam": 0.5, "ssim": 0.5}))
    hand_err = abs(hand.quality_index - 0.70)
    ok = in_range and one_hot_err <= 1e-12 and hand_err <= 1e-12
    record(9, ok, f"QI in [0,1] {'yes' if in_range else 'no'}, one-hot err {one_hot_err:.1e}, "
                  f"hand example err {hand_err:.1e}")
    assert ok


def test_10_cli_golden(tmp_path, capsys, monkeypatch):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    codes = [main(["synth", "--out-dir", str(d1)]), main(["synth", "--out-dir", str(d2)])]
    m1 = json.loads((d1 / "manifest.json").read_text())
    m2 = json.loads((d2 / "manifest.json").read_text())
    capsys.readouterr()

    bench = ["bench", "--ms", str(d1 / "ms_low.msi"), "--pan", str(d1 / "pan.msi"),
             "--ground-truth", str(d1 / "ground_truth.msi"), "--ratio", "2",
             "--methods", "brovey,pca,ihs,wavelet,cascade:pca+wavelet", "--format", "csv"]
    outs = []
    for threads in ("4", "1"):
        monkeypatch.setenv("PANFUSE_THREADS", threads)
        codes.append(main(bench))
        outs.append(capsys.readouterr().out)
    header = outs[0].splitlines()[0]
    strip = [[r[:-1] for r in csv.reader(io.StringIO(o))] for o in outs]
    header_ok = header == "Method,SAM,SID,SCP,SSIM,Edge,ESR,REF,PSNR,RMSE,QualityIndex,WallTimeSec"
    same_ok = strip[0] == strip[1]
    crc_ok = m1["checksums"] == m2["checksums"]

    codes_expected = [0, 0, 0, 0]
    codes.append(main(bench[:-4] + ["--methods", "ihs"]))
    codes_expected.append(1)
    codes.append(main(["synth", "--side", "100", "--out-dir", str(tmp_path / "c")]))
    codes_expected.append(2)
    codes.append(main(["fuse", "--bogus"]))
    codes_expected.append(2)
    capsys.readouterr()
    codes_ok = codes == codes_expected
    ok = header_ok and same_ok and crc_ok and codes_ok
    record(10, ok, f"header {'ok' if header_ok else 'wrong'}, bench content repeatable {same_ok}, "
                   f"manifest CRCs identical {crc_ok}, exit codes {codes}")
    assert ok


def test_11_cascade_coherence():
    t4, t3 = _triple(4), _triple(3)
    ok = True
    parts = []
    for tag, t in (("brovey", t4), ("pca", t4), ("wavelet", t4), ("ihs", t3)):
        inp = FusionInputs(_upsampled(t), t.pan, 2)
        same = fuse_cascade(inp, [tag]).identical(fuse(inp, tag))
        ok &= same
        parts.append(f"{tag} {'bit-identical' if same else 'differs'}")
    inp3 = FusionInputs(_upsampled(t3), t3.pan, 2)
    err = float(np.max(np.abs(fuse_cascade(inp3, ["ihs", "ihs"]).data - fuse_cascade(inp3, ["ihs"]).data)))
    ok &= err <= 1e-9
    record(11, ok, ", ".join(parts) + f"; [ihs, ihs] vs [ihs] {err:.1e}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
