"""Batch front-end: JSON configs in, deterministic JSON reports out.

Configs carry polynomials as explicit term lists, never expressions.
Reports wrap every number with a provenance tag, serialize counts as
decimal strings, and are byte-identical for a fixed config and seed
regardless of the parallelism degree.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .applications import (
    QuadricInstance,
    UnlikePowersInstance,
    count_quadric,
    count_unlike,
    predicted_exponents,
    quadric_cover_scale,
)
from .determinant import (
    aux_pipeline,
    build_matrix,
    congruence_certificates,
    rank_over_rationals,
)
from .enumeration import ResidueData, SideCondition, enumerate_points
from .errors import ContractViolation, HypothesisViolation
from .exponents import (
    BoxBounds,
    ExactLog,
    build_exponent_set,
    main_term_deviation,
    side_log_height,
)
from .polynomials import IntegerPolynomial, MonomialOrder, max_exponent


class UsageError(Exception):
    """Bad invocation or config; maps to exit code 1."""


# -- config parsing ---------------------------------------------------------------


def _require(cfg: dict, key: str):
    if key not in cfg:
        raise UsageError(f"missing field '{key}'")
    return cfg[key]


def _int_field(cfg: dict, key: str, default=None) -> int:
    if key not in cfg:
        if default is None:
            raise UsageError(f"missing field '{key}'")
        return default
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise UsageError(f"field '{key}' must be an integer")
    return v


def _poly_field(cfg: dict, key: str) -> IntegerPolynomial:
    obj = _require(cfg, key)
    if not isinstance(obj, dict) or "nvars" not in obj or "terms" not in obj:
        raise UsageError(f"field '{key}' must have 'nvars' and 'terms'")
    nvars = obj["nvars"]
    if not isinstance(nvars, int) or nvars < 1:
        raise UsageError(f"field '{key}.nvars' must be a positive integer")
    terms = {}
    for item in obj["terms"]:
        try:
            exps, coeff = item
            e = tuple(int(v) for v in exps)
            c = int(coeff)
        except (TypeError, ValueError):
            raise UsageError(
                f"field '{key}.terms' entries must be [exponents, coefficient]"
            )
        if len(e) != nvars or any(v < 0 for v in e):
            raise UsageError(
                f"field '{key}.terms' has an exponent vector of wrong shape"
            )
        terms[e] = terms.get(e, 0) + c
    return IntegerPolynomial(nvars, terms)


def _box_field(cfg: dict, key: str = "box") -> BoxBounds:
    v = _require(cfg, key)
    if not isinstance(v, list) or len(v) != 3:
        raise UsageError(f"field '{key}' must be a list of three bounds")
    return BoxBounds(*v)


# -- serialization helpers ----------------------------------------------------------


def _num(value, provenance: str) -> dict:
    return {"value": value, "provenance": provenance}


def _exact(value) -> dict:
    return _num(value, "exact")


def _count(n: int) -> dict:
    return _num(str(int(n)), "exact")


def _flt(value) -> dict:
    return _num(float(value), "float")


def _frac(value: Fraction) -> dict:
    return _num(str(value), "exact")


def _poly_json(p: IntegerPolynomial) -> dict:
    return {
        "nvars": p.nvars,
        "terms": [[list(e), str(c)] for e, c in sorted(p.terms.items())],
        "degree": _exact(p.total_degree()),
    }


def _cutoff_json(cutoff: ExactLog) -> dict:
    out = {"log": _flt(cutoff.value)}
    if cutoff.height is not None:
        out["height"] = _count(cutoff.height)
    return out


def _certificate_json(cert) -> dict:
    return {
        "modulus": _count(cert.base_modulus),
        "prime": _count(cert.prime),
        "prime_exponent": _exact(cert.prime_exponent),
        "lambda": _exact(cert.lam),
        "certified_divisor": _count(cert.certified_divisor),
        "shift": list(cert.shift),
        "inverse": _count(cert.inverse),
        "lift": _count(cert.lift),
        "det_transform": _count(cert.det_transform),
        "multiplicities": [
            [list(e), _exact(mu)] for e, mu in cert.multiplicities
        ],
        "checked_minors": [
            {
                "rows": list(cm.rows),
                "determinant_zero": cm.determinant_zero,
                "valuation": None if cm.valuation is None else _exact(cm.valuation),
            }
            for cm in cert.checked_minors
        ],
    }


def _params_json(params) -> dict:
    return {
        "modulus": _count(params.modulus),
        "epsilon": _flt(params.epsilon),
        "dominant_exponent": list(params.dominant),
        "side_exponent": list(params.side_exponent),
        "side_log_height": _flt(params.side.value),
        "log_top_height": _flt(params.log_top_height),
        "cover_scale": _flt(params.cover_scale),
        "cover_scale_eps": _flt(params.cover_scale_eps),
        "modulus_gain": _flt(params.modulus_gain),
    }


def _cover_json(report) -> tuple[dict, list, dict]:
    """Split a cover report into (result, certificates, diagnostics)."""
    classes = []
    certificates = []
    for oc in report.classes:
        cert_idx = []
        for cert in oc.certificates:
            cert_idx.append(len(certificates))
            certificates.append(_certificate_json(cert))
        entry = {
            "label": [list(map(int, t)) for t in oc.label],
            "points": _num([list(p) for p in oc.points], "exact"),
            "rows": _exact(oc.row_count),
            "columns": _exact(oc.column_count),
            "rank": _exact(oc.rank),
            "outcome": oc.outcome,
            "aux_index": oc.aux_index,
            "certificate_indices": cert_idx,
        }
        if oc.falsification is not None:
            rec = oc.falsification
            entry["falsification"] = {
                "rows": list(rec.rows),
                "determinant": _count(rec.determinant),
                "sqrt_columns_times_r": _flt(rec.sqrt_e_times_r),
                "threshold": _flt(rec.threshold),
                "valuations": [
                    {
                        "prime": _count(p),
                        "prime_exponent": _exact(j),
                        "lambda": _exact(lam),
                        "valuation": _exact(v),
                    }
                    for p, j, lam, v in rec.valuations
                ],
                "residue_valuations": [
                    {"prime": _count(rp), "valuation": _exact(v)}
                    for rp, v in rec.residue_valuations
                ],
            }
        classes.append(entry)
    result = {
        "branch": report.branch,
        "hypothesis_route": report.hypothesis_route,
        "auxiliary_count": _exact(len(report.auxiliaries)),
        "auxiliaries": [
            {
                "polynomial": _poly_json(a.poly),
                "degree": _exact(a.poly.total_degree()),
                "coprime_to_surface": a.coprime_to_f,
                "role": a.role,
                "vanishes_on": _exact(len(a.vanishes_on)),
            }
            for a in report.auxiliaries
        ],
        "classes": classes,
        "leftover_points": _num([list(p) for p in report.leftover], "exact"),
        "coverage_complete": report.coverage_complete,
    }
    e_count = report.set_size
    diagnostics = {
        "params": _params_json(report.params),
        "threshold": _flt(report.threshold),
        "residue_primes": [int(p) for p in report.residue_primes],
        "residue_product": _exact(report.residue_product),
        "cutoff": _cutoff_json(report.cutoff),
        "floor_constant": _exact(report.floor_constant),
        "set_size": _exact(e_count),
        "degree_cap": _exact(report.degree_cap),
        # reported beside any exact residue valuations, never asserted
        "residue_valuation_main_term": _num(
            2 * math.sqrt(2) * e_count ** 1.5 / 3, "main-term-diagnostic"
        ),
    }
    return result, certificates, diagnostics


def _timings(counts: dict) -> dict:
    out = {k: _exact(v) for k, v in sorted(counts.items())}
    out["note"] = "deterministic operation counters"
    return out


# -- per-command handlers -------------------------------------------------------------


def _run_enumerate(cfg: dict, seed: int) -> dict:
    f = _poly_field(cfg, "f")
    g = _poly_field(cfg, "g")
    q = _int_field(cfg, "q", 1)
    box = _box_field(cfg)
    nonsingular = bool(cfg.get("nonsingular_only", False))
    pts = enumerate_points(f, SideCondition(g, q), box, nonsingular_only=nonsingular)
    return {
        "instance": {
            "f": _poly_json(f), "g": _poly_json(g),
            "q": _count(q), "box": [int(b) for b in box.bounds],
            "nonsingular_only": nonsingular,
        },
        "result": {
            "count": _count(len(pts)),
            "points": _num([list(p) for p in pts], "exact"),
        },
        "certificates": [],
        "diagnostics": {},
        "timings": _timings({"points": len(pts)}),
    }


def _run_certify(cfg: dict, seed: int) -> dict:
    f = _poly_field(cfg, "f")
    g = _poly_field(cfg, "g")
    q = _int_field(cfg, "q")
    box = _box_field(cfg)
    base = _int_field(cfg, "cutoff_base", box.bmax)
    power = _int_field(cfg, "cutoff_power")
    samples = _int_field(cfg, "minor_samples", 32)
    cutoff = ExactLog.power(base, power)
    order = MonomialOrder.weighted(box.bounds)
    m = max_exponent(f, order)
    E = build_exponent_set(cutoff, m, box, order)
    pts = enumerate_points(f, SideCondition(g, q), box)
    if not len(pts):
        raise ContractViolation("no points to certify")
    M = build_matrix(list(pts), E)
    _, S = side_log_height(g, box)
    certs = congruence_certificates(
        M, g, q, E, S, samples=samples, rng=random.Random(seed)
    )
    dev_count, dev_sum = main_term_deviation(E)
    return {
        "instance": {
            "f": _poly_json(f), "g": _poly_json(g),
            "q": _count(q), "box": [int(b) for b in box.bounds],
            "cutoff": _cutoff_json(cutoff),
        },
        "result": {
            "points": _count(len(pts)),
            "set_size": _exact(len(E)),
            "rank": _exact(rank_over_rationals(M)),
            "total_lambda": _exact(sum(c.lam for c in certs)),
        },
        "certificates": [_certificate_json(c) for c in certs],
        "diagnostics": {
            "dominant_exponent": list(m),
            "main_term_deviation_count": _num(float(dev_count), "main-term-diagnostic"),
            "main_term_deviation_sum": _num(float(dev_sum), "main-term-diagnostic"),
        },
        "timings": _timings({
            "points": len(pts),
            "minors_checked": sum(len(c.checked_minors) for c in certs),
        }),
    }


def _run_aux(cfg: dict, seed: int) -> dict:
    f = _poly_field(cfg, "f")
    g = _poly_field(cfg, "g")
    q = _int_field(cfg, "q")
    box = _box_field(cfg)
    epsilon = float(_require(cfg, "epsilon"))
    residues = None
    if "residue_primes" in cfg:
        residues = ResidueData(tuple(int(p) for p in cfg["residue_primes"]))
    floor_const = cfg.get("floor_const")
    if floor_const is not None:
        floor_const = int(floor_const)
    scale_override = cfg.get("scale_override")
    samples = _int_field(cfg, "minor_samples", 32)
    pts = enumerate_points(f, SideCondition(g, q), box)
    report = aux_pipeline(
        f, g, q, box, residues, epsilon, list(pts),
        seed=seed, minor_samples=samples,
        floor_const=floor_const, scale_override=scale_override,
    )
    result, certificates, diagnostics = _cover_json(report)
    dev_count, dev_sum = main_term_deviation(
        build_exponent_set(
            report.cutoff, report.params.dominant, box,
            MonomialOrder.weighted(box.bounds),
        )
    )
    diagnostics["main_term_deviation_count"] = _num(
        float(dev_count), "main-term-diagnostic"
    )
    diagnostics["main_term_deviation_sum"] = _num(
        float(dev_sum), "main-term-diagnostic"
    )
    result["count"] = _count(len(pts))
    return {
        "instance": {
            "f": _poly_json(f), "g": _poly_json(g),
            "q": _count(q), "box": [int(b) for b in box.bounds],
            "epsilon": _flt(epsilon),
        },
        "result": result,
        "certificates": certificates,
        "diagnostics": diagnostics,
        "timings": _timings(dict(report.counts)),
    }


def _run_quadric(cfg: dict, seed: int) -> dict:
    a = _require(cfg, "a")
    if not isinstance(a, list) or len(a) != 3:
        raise UsageError("field 'a' must be a list of three coefficients")
    n = _int_field(cfg, "n")
    B = _int_field(cfg, "B")
    mode = cfg.get("mode", "brute")
    inst = QuadricInstance(a[0], a[1], a[2], n, B)
    kwargs = {}
    if mode == "pipeline":
        kwargs["epsilon"] = float(cfg.get("epsilon", 0.5))
        if cfg.get("floor_const") is not None:
            kwargs["floor_const"] = int(cfg["floor_const"])
        kwargs["seed"] = seed
        kwargs["minor_samples"] = _int_field(cfg, "minor_samples", 32)
    out = count_quadric(inst, mode, **kwargs)
    exps = predicted_exponents(inst)
    instance = {
        "a": [inst.a1, inst.a2, inst.a3],
        "n": _exact(inst.n),
        "B": _exact(inst.B),
        "mode": mode,
    }
    result = {"count": _count(out.count)}
    certificates: list = []
    diagnostics: dict = {
        "predicted_box_powers": [_frac(v) for v in exps.box_powers],
        "predicted_coefficient_powers": [
            _frac(v) for v in exps.coefficient_powers
        ],
    }
    timings = {"points": len(out.points)}
    if out.report is not None:
        cover_result, certificates, cover_diag = _cover_json(out.report)
        result["cover"] = cover_result
        result["permutation"] = list(out.permutation)
        result["modulus"] = _count(out.modulus)
        diagnostics.update(cover_diag)
        diagnostics["sharpened_scale"] = _flt(
            quadric_cover_scale(out.modulus, inst.B)
        )
        timings.update(out.report.counts)
    return {
        "instance": instance,
        "result": result,
        "certificates": certificates,
        "diagnostics": diagnostics,
        "timings": _timings(timings),
    }


def _run_unlike(cfg: dict, seed: int) -> dict:
    inst = UnlikePowersInstance(
        _int_field(cfg, "k"), _int_field(cfg, "l"), _int_field(cfg, "m"),
        _int_field(cfg, "N"), _int_field(cfg, "B"),
    )
    mode = cfg.get("mode", "brute")
    out = count_unlike(inst, mode)
    exps = predicted_exponents(inst)
    result = {"count": _count(out.count)}
    if out.zero_slice is not None:
        result["zero_slice_count"] = _count(out.zero_slice)
        result["slices"] = [[u, _count(c)] for u, c in out.per_slice]
        result["assumed_hypothesis"] = out.assumed_hypothesis
    return {
        "instance": {
            "k": _exact(inst.k), "l": _exact(inst.l), "m": _exact(inst.m),
            "N": _exact(inst.N), "B": _exact(inst.B), "mode": mode,
        },
        "result": result,
        "certificates": [],
        "diagnostics": {
            "predicted_main_exponent": _flt(exps.main),
            "predicted_secondary_exponent": _flt(exps.secondary),
            "predicted_comparison_exponent": _flt(exps.comparison),
        },
        "timings": _timings({"slices": len(out.per_slice or ())}),
    }


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residuals: tuple


def fit_exponent(counts) -> "FitResult":
    """Least-squares growth exponent of counts against box sizes.

    Fits log(count) on log(B), mapping zero counts to log 1, and returns
    the slope, intercept, and per-point residuals.
    """
    pts = []
    for item in counts:
        try:
            b, c = item
            pts.append((int(b), int(c)))
        except (TypeError, ValueError):
            raise ContractViolation("counts must be (box, count) pairs")
    if any(b < 2 for b, _ in pts):
        raise ContractViolation("box sizes must be at least 2")
    if any(c < 0 for _, c in pts):
        raise ContractViolation("counts must be nonnegative")
    if len({b for b, _ in pts}) < 3:
        raise ContractViolation("need at least 3 distinct box sizes")
    xs = [math.log(b) for b, _ in pts]
    ys = [math.log(c) if c >= 1 else 0.0 for _, c in pts]
    n = len(pts)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    residuals = tuple(y - (slope * x + intercept) for x, y in zip(xs, ys))
    return FitResult(slope=slope, intercept=intercept, residuals=residuals)


def _run_fit(cfg: dict, seed: int) -> dict:
    counts = _require(cfg, "counts")
    if not isinstance(counts, list):
        raise UsageError("field 'counts' must be a list of [B, count] pairs")
    fit = fit_exponent(counts)
    diagnostics: dict = {}
    if "quadric" in cfg:
        sub = cfg["quadric"]
        inst = QuadricInstance(
            *(_require(sub, "a")), _int_field(sub, "n"), _int_field(sub, "B", 2)
        )
        exps = predicted_exponents(inst)
        diagnostics["predicted_box_powers"] = [_frac(v) for v in exps.box_powers]
    if "unlike" in cfg:
        sub = cfg["unlike"]
        inst = UnlikePowersInstance(
            _int_field(sub, "k"), _int_field(sub, "l"), _int_field(sub, "m"),
            _int_field(sub, "N"), _int_field(sub, "B", 2),
        )
        exps = predicted_exponents(inst)
        diagnostics["predicted_main_exponent"] = _flt(exps.main)
    return {
        "instance": {"counts": [[int(b), str(int(c))] for b, c in counts]},
        "result": {
            "slope": _flt(fit.slope),
            "intercept": _flt(fit.intercept),
            "residuals": [_flt(r) for r in fit.residuals],
        },
        "certificates": [],
        "diagnostics": diagnostics,
        "timings": _timings({"points": len(counts)}),
    }


_HANDLERS = {
    "enumerate": _run_enumerate,
    "certify": _run_certify,
    "aux": _run_aux,
    "quadric": _run_quadric,
    "unlike": _run_unlike,
    "fit": _run_fit,
}


# -- entry point ------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="detsieve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
    return parser


def run(command: str, config, seed: int = 0, threads: int = 1) -> object:
    """Execute one command over a config document.

    A dict config yields a single report object; a list yields a list of
    per-instance reports computed independently (and in parallel when
    threads > 1), assembled in input order.
    """
    handler = _HANDLERS.get(command)
    if handler is None:
        raise UsageError(f"unknown command '{command}'")
    if threads < 1:
        raise UsageError("threads must be positive")

    def one(cfg) -> dict:
        if not isinstance(cfg, dict):
            raise UsageError("each instance config must be an object")
        report = handler(cfg, seed)
        report["provenance"] = {
            "command": command,
            "seed": seed,
            "version": __version__,
            "determinism": "fixed seed; counters in place of wall time",
        }
        return report

    if isinstance(config, dict):
        return one(config)
    if isinstance(config, list):
        if threads == 1:
            return [one(c) for c in config]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, config))
    raise UsageError("config must be an object or a list of objects")


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                config = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}")
        report = run(args.command, config, seed=args.seed, threads=args.threads)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ContractViolation as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return 1
    except HypothesisViolation as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return 2

    text = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
