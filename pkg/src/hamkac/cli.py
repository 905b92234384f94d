"""Command-line driver.

    hamkac run --p 5 --t 1,1 --chi I --lambda all --checks all

Exit status: 0 when every requested check passed, 1 when a mathematical check
failed (the report carries the witness), 2 on an invalid configuration.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass

from . import repkit
from .dpsuper import Shape
from .gfp import FieldError, check_modulus
from .hamalg import HamAlgebra, solved_gr_structure, verify_gr, verify_osp
from .kacmod import (
    ConfigError,
    build_kac,
    height,
    named_character,
    verify_chi_reduced,
    verify_module_law,
)
from .l0rep import build_l0, check_l0

log = logging.getLogger("hamkac")

CHECKS = ("gr", "osp", "module_law", "chi_reduced", "meataxe", "hom", "classify")
ENV_CACHE = "HAMKAC_CACHE"

DEFAULTS = {
    "p": None,
    "t": "1,1",
    "chi": "I",
    "lambda": "all",
    "checks": "all",
    "mode": "sampled",
    "seed": 0,
    "cache": None,
    "out": None,
    "json": False,
    "workers": 1,
    "allow_any_height": False,
    "hom_budget": repkit.HOM_BUDGET,
    "timings": False,
}


@dataclass
class JobConfig:
    p: int
    t1: int
    t2: int
    chi: list
    lambdas: list
    checks: list
    mode: str = "sampled"
    seed: int = 0
    cache: str | None = None
    out: str | None = None
    json: bool = False
    workers: int = 1
    allow_any_height: bool = False
    hom_budget: int = repkit.HOM_BUDGET
    timings: bool = False

    def key(self) -> dict:
        """The part of the configuration that determines the report."""
        d = asdict(self)
        for k in ("cache", "out", "json", "workers"):
            d.pop(k)
        return d

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.key(), sort_keys=True).encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# configuration


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` lines; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected key = value" % (path, n))
            k, v = (s.strip() for s in line.split("=", 1))
            k = k.replace("-", "_")
            if k not in DEFAULTS:
                raise ConfigError("%s:%d: unknown key %r" % (path, n, k))
            out[k] = v
    return out


def _bool(v) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).strip().lower() in ("1", "true", "yes", "on")


def _split_chi(text: str) -> list[str]:
    if text.startswith("custom:"):
        return [text]
    return [c.strip() for c in text.split(",") if c.strip()]


def make_config(values: dict) -> JobConfig:
    """Validate merged settings (flags over config file over defaults)."""
    if values.get("p") is None:
        raise ConfigError("--p is required")
    try:
        p = int(values["p"])
    except ValueError:
        raise ConfigError("p must be prime > 3") from None
    check_modulus(p)
    try:
        t1, t2 = (int(x) for x in str(values["t"]).split(","))
    except ValueError:
        raise ConfigError("--t expects two integers A,B") from None
    if t1 < 1 or t2 < 1:
        raise ConfigError("t1, t2 must be positive integers")
    lam_text = str(values["lambda"]).strip()
    if lam_text == "all":
        lambdas = list(range(p))
    elif lam_text == "":
        lambdas = []
    else:
        try:
            lambdas = [int(x) for x in lam_text.split(",")]
        except ValueError:
            raise ConfigError("--lambda expects 'all' or a list of integers") from None
        if any(not 0 <= x < p for x in lambdas):
            raise ConfigError("lambda values must lie in [0, p)")
    checks_text = str(values["checks"]).strip()
    checks = list(CHECKS) if checks_text == "all" else [c.strip() for c in checks_text.split(",") if c.strip()]
    bad = [c for c in checks if c not in CHECKS]
    if bad:
        raise ConfigError("unknown checks: %s" % ", ".join(bad))
    mode = str(values["mode"])
    if mode not in ("full", "sampled"):
        raise ConfigError("--mode must be full or sampled")
    return JobConfig(
        p=p, t1=t1, t2=t2,
        chi=_split_chi(str(values["chi"])),
        lambdas=lambdas,
        checks=checks,
        mode=mode,
        seed=int(values["seed"]),
        cache=values.get("cache"),
        out=values.get("out"),
        json=_bool(values["json"]),
        workers=max(1, int(values["workers"])),
        allow_any_height=_bool(values["allow_any_height"]),
        hom_budget=int(values["hom_budget"]),
        timings=_bool(values["timings"]),
    )


# ---------------------------------------------------------------------------
# pipeline


def run(cfg: JobConfig) -> tuple[int, dict]:
    """Execute the requested checks; returns (exit status, report)."""
    shape = Shape(cfg.p, cfg.t1, cfg.t2)
    alg = HamAlgebra(shape, cfg.cache)
    chars = {}
    for name in cfg.chi:
        chi = named_character(alg, name)
        ht = height(chi, alg)
        if ht != 0 and not cfg.allow_any_height:
            raise ConfigError("chi %s has height %d, not 0 (use --allow-any-height)" % (name, ht))
        chars[name] = chi

    report: dict = {
        "config": cfg.key(),
        "algebra": {"dim": alg.dim, "expected_dim": 2 * cfg.p ** (cfg.t1 + cfg.t2) - 1},
        "checks": {},
        "cells": [],
        "notes": [],
    }
    ok = alg.dim == report["algebra"]["expected_dim"]
    gr = solved_gr_structure(alg)

    if "gr" in cfg.checks:
        _, literal = verify_gr(alg)
        _, solved = verify_gr(alg, gr)
        report["checks"]["gr"] = {"closed_form": literal, "solved": solved,
                                  "passed": solved["passed"]}
        ok &= solved["passed"]
        if not literal["passed"]:
            report["notes"].append("closed-form phi fails at %s; solved phi used" % (
                literal["failures"][0]["element"],))
    if "osp" in cfg.checks:
        rep = verify_osp(alg)
        report["checks"]["osp"] = rep
        ok &= rep["passed"]

    cells = [(name, lam) for name in cfg.chi for lam in cfg.lambdas]
    if cfg.workers > 1 and len(cells) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(cfg.workers) as ex:
            rows = list(ex.map(_cell_job, [(cfg, n, lam) for n, lam in cells]))
    else:
        rows = [_cell(cfg, alg, gr, chars[n], n, lam) for n, lam in cells]
    for row in rows:
        report["cells"].append(row)
        ok &= row["passed"]

    if "hom" in cfg.checks or "classify" in cfg.checks:
        homs = _hom_checks(cfg, alg, chars)
        report["hom_checks"] = homs
        ok &= all(h.get("passed", True) for h in homs)
    if "classify" in cfg.checks:
        table = [c["row"] for c in report["cells"] if "row" in c]
        by_type: dict = {}
        for r in table:
            by_type.setdefault(r["chi_type"], []).append(r["dim"])
        distinct = all(len(set(v)) == len(v) for v in by_type.values())
        dims_ok = all(r["dim"] == repkit.expected_dim(shape, r["lambda"]) for r in table)
        report["classification"] = {"rows": table, "distinct_dims": distinct,
                                    "expected_dims": dims_ok}
        report["notes"].append(
            "character types I, II and III are all run")
        ok &= distinct and dims_ok
    report["passed"] = bool(ok)
    return (0 if ok else 1), report


def _cell_job(args):
    cfg, name, lam = args
    shape = Shape(cfg.p, cfg.t1, cfg.t2)
    alg = HamAlgebra(shape, cfg.cache)
    return _cell(cfg, alg, solved_gr_structure(alg), named_character(alg, name), name, lam)


def _cell(cfg: JobConfig, alg, gr, chi, name: str, lam: int) -> dict:
    t0 = time.perf_counter()
    p = cfg.p
    out: dict = {"chi_type": name, "lambda": lam}
    ok = True
    L0 = build_l0(lam, p)
    l0rep = check_l0(L0, alg)
    out["l0"] = {k: l0rep[k] for k in ("passed", "failures", "dim", "endo_dim")}
    ok &= l0rep["passed"]
    M = build_kac(alg, chi, lam, cache_dir=cfg.cache)
    out["dim"] = M.dim
    out["expected_dim"] = repkit.expected_dim(alg.shape, lam)
    ok &= M.dim == out["expected_dim"]
    if "module_law" in cfg.checks:
        r = verify_module_law(M, cfg.mode, seed=repkit.derived_seed(cfg.seed, "law", name, lam))
        out["module_law"] = r
        ok &= r["passed"]
    if "chi_reduced" in cfg.checks:
        r = verify_chi_reduced(M, gr)
        out["chi_reduced"] = r
        ok &= r["passed"]
    if "meataxe" in cfg.checks or "classify" in cfg.checks:
        mseed = repkit.derived_seed(cfg.seed, "meataxe", name, lam)
        cert = repkit.meataxe(M.generators(), M.parity, p, mseed)
        out["meataxe"] = cert.summary()
        ok &= cert.absolutely_irreducible
        ws = repkit.weight_spaces(M.rho_named("h"), p)
        row = {
            "chi_type": name,
            "lambda": lam,
            "dim": M.dim,
            "irreducible": cert.verdict == "irreducible",
            "endo_dim": cert.endo_dim,
            "weight_signature": [[w, ws[w]] for w in sorted(ws)],
            "meataxe_seed": mseed,
            "elapsed_ms": int((time.perf_counter() - t0) * 1000) if cfg.timings else None,
        }
        out["row"] = {k: row[k] for k in repkit.ROW_FIELDS}
    out["passed"] = bool(ok)
    return out


def _hom_checks(cfg: JobConfig, alg, chars) -> list[dict]:
    out = []
    for name, chi in chars.items():
        mods = {}
        for i, lam in enumerate(cfg.lambdas):
            for mu in cfg.lambdas[i:]:
                dl, dm = repkit.expected_dim(alg.shape, lam), repkit.expected_dim(alg.shape, mu)
                if dl * dm > cfg.hom_budget:
                    continue
                for x in (lam, mu):
                    if x not in mods:
                        mods[x] = build_kac(alg, chi, x, cache_dir=cfg.cache)
                A, B = mods[lam], mods[mu]
                d = repkit.hom_space(A.generators(), B.generators(), A.parity, B.parity,
                                     cfg.p, cfg.hom_budget)
                want = 1 if lam == mu else 0
                out.append({"chi_type": name, "lambda": lam, "mu": mu, "even": d["even"],
                            "odd": d["odd"], "hom_dim": d["total"], "expected": want,
                            "passed": d["total"] == want})
    return out


# ---------------------------------------------------------------------------
# output


def format_table(report: dict) -> str:
    lines = ["H(2,1;(%d,%d)) over F_%d: dim %d" % (
        report["config"]["t1"], report["config"]["t2"], report["config"]["p"],
        report["algebra"]["dim"])]
    for name in ("gr", "osp"):
        if name in report["checks"]:
            lines.append("%-12s %s" % (name, "pass" if report["checks"][name]["passed"] else "FAIL"))
    if report["cells"]:
        lines.append("%-10s %6s %6s %6s %8s %8s %6s" % (
            "chi", "lambda", "dim", "law", "reduced", "simple", "endo"))
    for c in report["cells"]:
        mx = c.get("meataxe", {})
        lines.append("%-10s %6d %6d %6s %8s %8s %6s" % (
            c["chi_type"][:10], c["lambda"], c["dim"],
            _mark(c.get("module_law")), _mark(c.get("chi_reduced")),
            mx.get("verdict", "-")[:8], mx.get("endo_dim", "-")))
    for h in report.get("hom_checks", []):
        lines.append("hom %s K(%d)->K(%d): %d (expected %d)" % (
            h["chi_type"], h["lambda"], h["mu"], h["hom_dim"], h["expected"]))
    for n in report["notes"]:
        lines.append("note: " + n)
    lines.append("overall: %s" % ("pass" if report["passed"] else "FAIL"))
    return "\n".join(lines)


def _mark(r) -> str:
    if r is None:
        return "-"
    return "pass" if r["passed"] else "FAIL"


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False, default=_jsonable) + "\n"


def _jsonable(x):
    import numpy as np
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(type(x).__name__)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hamkac", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the verification pipeline")
    r.add_argument("--config", help="flat key = value file (flags take precedence)")
    r.add_argument("--p", type=str)
    r.add_argument("--t", help="A,B")
    r.add_argument("--chi", help="I, II, III, 0, a comma list of those, or custom:key=val,...")
    r.add_argument("--lambda", dest="lambda_", help="'all' or a comma list")
    r.add_argument("--checks", help="'all' or a subset of " + ",".join(CHECKS))
    r.add_argument("--mode", choices=("full", "sampled"))
    r.add_argument("--seed", type=int)
    r.add_argument("--cache")
    r.add_argument("--out")
    r.add_argument("--json", action="store_true", default=None)
    r.add_argument("--workers", type=int)
    r.add_argument("--allow-any-height", action="store_true", default=None)
    r.add_argument("--hom-budget", type=int)
    r.add_argument("--timings", action="store_true", default=None,
                   help="record elapsed_ms (reports are then no longer byte-stable)")
    r.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        values = dict(DEFAULTS)
        if args.config:
            values.update(read_config_file(args.config))
        flags = {k: v for k, v in vars(args).items() if v is not None}
        if "lambda_" in flags:
            flags["lambda"] = flags.pop("lambda_")
        for k in ("config", "command", "verbose"):
            flags.pop(k, None)
        values.update(flags)
        if os.environ.get(ENV_CACHE):
            values["cache"] = os.environ[ENV_CACHE]
        cfg = make_config(values)
        status, report = run(cfg)
    except (ConfigError, FieldError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    text = dump_report(report)
    out = cfg.out or "hamkac-report-%s.json" % cfg.digest()
    with open(out, "w") as fh:
        fh.write(text)
    if cfg.json:
        sys.stdout.write(text)
    else:
        print(format_table(report))
        print("report: %s" % out)
    return status


if __name__ == "__main__":
    sys.exit(main())
