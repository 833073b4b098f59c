"""``hwig`` command line: run heralding scenarios and export reduced Wigner grids.

Exit codes: 0 ok, 2 config error, 3 herald impossible, 4 numerical
verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import PRESETS, ScenarioConfig, parse, scenario_dict, serialize
from .errors import ConfigError, HeraldImpossibleError, ReductionError
from .heralding import DetectorKernel, HeraldedState, add_photon, subtract_photon
from .modes import FieldVector, Kernel, ModeBasis, random_unitary
from .reduction import (
    ReducedWignerGrid,
    mode_overlap,
    negativity_metrics,
    reduce_heralded,
    sample_grid,
)
from .states import ThermalSpec, make_coherent, make_squeezed_vacuum, make_thermal, make_vacuum
from .transforms import WeakBogoliubov, bogoliubov_pair

log = logging.getLogger("hwig")

EXIT_OK, EXIT_CONFIG, EXIT_HERALD, EXIT_VERIFY = 0, 2, 3, 4
GRID_TOL = 1e-3
ANALYTIC_TOL = 1e-8


@dataclass
class ScenarioResult:
    cfg: ScenarioConfig
    heralded: HeraldedState
    grid: ReducedWignerGrid
    lo_mode: FieldVector

    @property
    def metrics(self):
        return negativity_metrics(self.grid)

    def grid_residual(self) -> float:
        return abs(self.grid.quadrature() - 1.0)

    def verified(self) -> bool:
        return self.grid_residual() <= GRID_TOL and self.heralded.normalization_residual() <= ANALYTIC_TOL


def build_heralded(cfg: ScenarioConfig):
    """Embed the scenario in ``n_modes`` modes and herald it.

    The principal mode and a second orthogonal mode are the first two columns
    of a seeded random unitary; the detector mode mixes them according to
    ``detector_overlap``.
    """
    n = cfg.n_modes
    basis = ModeBasis(n)
    rng = np.random.default_rng(cfg.seed)
    W = random_unitary(n, rng) if n > 1 else np.ones((1, 1), dtype=complex)
    S = W[:, 0]
    M = np.sqrt(cfg.detector_overlap) * S
    if n > 1:
        M = M + np.sqrt(1.0 - cfg.detector_overlap) * W[:, 1]
    det = DetectorKernel(FieldVector(basis, M))
    principal = FieldVector(basis, S)

    if cfg.kind == "subtract-squeezed":
        U, V = bogoliubov_pair(basis, [cfg.r, cfg.r2], [cfg.phi, cfg.phi2], W)
        hs = subtract_photon(make_squeezed_vacuum(U, V), det)
    else:
        wb = WeakBogoliubov.from_v(Kernel(basis, cfg.v_scale * np.outer(S, S)), cfg.strength)
        if cfg.kind == "add-coherent":
            W_in = make_coherent(basis, principal * cfg.xi0)
        elif cfg.kind == "add-thermal":
            W_in = make_thermal(ThermalSpec(cfg.tau, principal))
        else:
            W_in = make_vacuum(basis)
        hs = add_photon(W_in, wb, det)
    lo = det.mode if cfg.lo_mode == "detector" else principal
    return hs, lo


def run_core(cfg: ScenarioConfig) -> ScenarioResult:
    hs, lo = build_heralded(cfg)
    reduced = reduce_heralded(hs)
    d = reduced.basis.n_modes
    if d == 1:
        axes = (cfg.q, cfg.p)
    elif d == 2:
        axes = (cfg.axis4,) * 4
    else:
        raise ReductionError(f"reduced subspace has dimension {d}; only 1 or 2 supported")
    return ScenarioResult(cfg, hs, sample_grid(reduced, axes), lo)


def _fmt(x: float) -> str:
    return "%.17g" % x


def grid_csv(grid: ReducedWignerGrid) -> str:
    header = ["q", "p", "w"] if grid.dims == 2 else ["q1", "p1", "q2", "p2", "w"]
    mesh = np.meshgrid(*grid.coordinates(), indexing="ij")
    cols = [m.ravel() for m in mesh] + [grid.values.ravel()]
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*cols):
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def grid_pgm(grid: ReducedWignerGrid) -> bytes:
    """8-bit grayscale image, ``p`` increasing upward, ``q`` to the right."""
    v = grid.values.T[::-1]
    lo, hi = float(v.min()), float(v.max())
    scaled = np.zeros_like(v) if hi == lo else (v - lo) / (hi - lo)
    pixels = np.round(scaled * 255).astype(np.uint8)
    h, w = pixels.shape
    return f"P5\n{w} {h}\n255\n".encode() + pixels.tobytes()


def summary(res: ScenarioResult) -> dict:
    m = res.metrics
    hs = res.heralded
    return {
        "scenario": res.cfg.name,
        "parameters": scenario_dict(res.cfg),
        "status": "ok" if res.verified() else "verification-failed",
        "grid_dims": res.grid.dims,
        "min_value": m.min_value,
        "argmin": list(m.argmin),
        "negative_volume": m.negative_volume,
        "norm_inverse": hs.norm_inverse,
        "success_probability": hs.success_probability(res.cfg.strength),
        "normalization_residual": hs.normalization_residual(),
        "grid_normalization_residual": res.grid_residual(),
        "lo_overlap": mode_overlap(res.lo_mode, hs.subspace[0]),
        "subspace_modes": [[[float(z.real), float(z.imag)] for z in v.amps] for v in hs.subspace],
    }


def write_outputs(res: ScenarioResult, out: Path) -> list:
    out.mkdir(parents=True, exist_ok=True)
    cfg = res.cfg
    written = []
    grids = {cfg.name: res.grid}
    if res.grid.dims == 4:
        grids = {
            cfg.name: res.grid.section({2: 0.0, 3: 0.0}),
            f"{cfg.name}_plane2": res.grid.section({0: 0.0, 1: 0.0}),
        }
        if cfg.full4d:
            path = out / f"{cfg.name}_4d.csv"
            path.write_text(grid_csv(res.grid))
            written.append(path)
    for stem, g in grids.items():
        if cfg.format == "csv":
            path = out / f"{stem}.csv"
            path.write_text(grid_csv(g))
        else:
            path = out / f"{stem}.pgm"
            path.write_bytes(grid_pgm(g))
        written.append(path)
    path = out / f"{cfg.name}.summary.json"
    path.write_text(json.dumps(summary(res), indent=2, sort_keys=True) + "\n")
    written.append(path)
    (out / f"{cfg.name}.config.ini").write_text(serialize(cfg))
    return written


def run_scenario(cfg: ScenarioConfig) -> int:
    """Run one scenario, write its artifacts and return the exit status."""
    try:
        res = run_core(cfg)
    except HeraldImpossibleError as exc:
        log.error("%s", exc)
        return EXIT_HERALD
    for path in write_outputs(res, Path(cfg.dir)):
        log.info("wrote %s", path)
    if not res.verified():
        log.error("normalization check failed (grid residual %.3e)", res.grid_residual())
        return EXIT_VERIFY
    return EXIT_OK


SWEEP_COLUMNS = (
    "status", "min_value", "argmin", "negative_volume", "norm_inverse",
    "success_probability", "lo_overlap", "grid_normalization_residual", "message",
)


def _sweep_point(cfg: ScenarioConfig) -> dict:
    try:
        res = run_core(cfg)
    except (HeraldImpossibleError, ReductionError, ConfigError) as exc:
        return {"status": "failed", "message": str(exc)}
    s = summary(res)
    row = {k: s[k] for k in SWEEP_COLUMNS if k in s}
    row["argmin"] = " ".join(_fmt(c) for c in s["argmin"])
    row["message"] = ""
    return row


def sweep(cfg: ScenarioConfig, jobs: int = 1) -> str:
    """Evaluate the Cartesian product of ``cfg.sweep``; returns CSV text.

    Points run concurrently but rows are emitted in product order.
    """
    if not cfg.sweep:
        raise ConfigError("config has no [sweep] section")
    keys = [k for k, _ in cfg.sweep]
    points = list(itertools.product(*[vals for _, vals in cfg.sweep]))

    def make(values):
        return cfg.with_values(**dict(zip(keys, values)))

    cfgs = []
    for values in points:
        try:
            cfgs.append(make(values))
        except ConfigError as exc:
            cfgs.append(exc)

    def work(c):
        return {"status": "failed", "message": str(c)} if isinstance(c, Exception) else _sweep_point(c)

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        rows = list(pool.map(work, cfgs))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys + list(SWEEP_COLUMNS))
    for values, row in zip(points, rows):
        cells = [repr(v) if isinstance(v, (float, complex)) else str(v) for v in values]
        for col in SWEEP_COLUMNS:
            v = row.get(col, "")
            cells.append(_fmt(v) if isinstance(v, float) else str(v))
        writer.writerow(cells)
    return buf.getvalue()


def _overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    kw = {}
    if args.out is not None:
        kw["dir"] = args.out
    if args.grid is not None:
        from .reduction import Axis
        try:
            ax = Axis.parse(args.grid)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad --grid {args.grid!r}: {exc}") from exc
        kw.update(q=ax, p=ax)
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.format is not None:
        kw["format"] = args.format
    return cfg.with_values(**kw) if kw else cfg


def _load(path: str) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory")
    common.add_argument("--grid", help="q and p axis as qmin:qmax:n")
    common.add_argument("--seed", type=int, help="mode-embedding seed")
    common.add_argument("--format", choices=("csv", "pgm"), help="grid output format")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="hwig", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", parents=[common], help="run a scenario config file")
    p_run.add_argument("config")
    p_pre = sub.add_parser("preset", parents=[common], help="run a built-in scenario")
    p_pre.add_argument("name", choices=sorted(PRESETS))
    p_pre.add_argument("--print-config", action="store_true", help="print the preset config and exit")
    p_sw = sub.add_parser("sweep", parents=[common], help="sweep parameters from a config file")
    p_sw.add_argument("config")
    p_sw.add_argument("--jobs", type=int, default=1)
    return ap


def _attach_grid_value(argv):
    # "--grid -4:4:161" would otherwise parse the negative bound as an option
    out = list(argv)
    for i, tok in enumerate(out[:-1]):
        if tok == "--grid":
            out[i : i + 2] = [f"--grid={out[i + 1]}"]
            break
    return out


def main(argv=None) -> int:
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = ap.parse_args(_attach_grid_value(argv))
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        if args.command == "preset":
            cfg = _overrides(PRESETS[args.name], args)
            if args.print_config:
                sys.stdout.write(serialize(cfg))
                return EXIT_OK
            return run_scenario(cfg)
        cfg = _overrides(_load(args.config), args)
        if args.command == "run":
            return run_scenario(cfg)
        out = Path(cfg.dir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{cfg.name}_sweep.csv"
        path.write_text(sweep(cfg, args.jobs))
        log.info("wrote %s", path)
        return EXIT_OK
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
