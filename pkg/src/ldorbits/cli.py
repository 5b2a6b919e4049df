"""Batch front end: ``ldorbits --config job.json --out DIR``.

Exit status is 0 on success, 1 on input or budget errors and 2 when a check
that can only fail through a bug or a genuine counterexample fires.
"""
import argparse
import csv
import hashlib
import json
import logging
import math
import os
import platform
import sys
from fractions import Fraction

from . import __version__
from .errors import ConfigInvalid, LdoError, TheoremViolation
from .exactlin import Matrix
from .numfield import Place, PlaceSet, nf_create

SCHEMA_VERSION = 1
JOBS = ("stratify", "predict-closure", "units", "forms", "verify")

log = logging.getLogger("ldorbits")


# ---- config parsing ---------------------------------------------------------


def _rational(x, what):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ConfigInvalid("%s: expected an integer or a 'p/q' string, got %r" % (what, x))
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise ConfigInvalid("%s: cannot parse %r as a rational" % (what, x))


def _element(K, x, what):
    if not isinstance(x, list):
        if K.degree == 1:
            return K(_rational(x, what))
        raise ConfigInvalid("%s: expected a coordinate array of length %d" % (what, K.degree))
    if len(x) != K.degree:
        raise ConfigInvalid("%s: expected %d coordinates, got %d" % (what, K.degree, len(x)))
    return K([_rational(c, what) for c in x])


def _matrix(K, n, rows, what):
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise ConfigInvalid("%s: expected an %dx%d array" % (what, n, n))
    return Matrix(K, [[_element(K, x, "%s[%d][%d]" % (what, i, j)) for j, x in enumerate(r)] for i, r in enumerate(rows)])


def _place(x):
    if not isinstance(x, dict) or "kind" not in x:
        raise ConfigInvalid("place records need a 'kind'")
    kind = x["kind"]
    if kind == "finite":
        if not isinstance(x.get("p"), int):
            raise ConfigInvalid("finite places need an integer 'p'")
        return Place("finite", x["p"])
    if kind in ("real", "complex"):
        if not isinstance(x.get("index", 0), int):
            raise ConfigInvalid("place index must be an integer")
        return Place(kind, x.get("index", 0))
    raise ConfigInvalid("unknown place kind %r" % kind)


class JobConfig:
    def __init__(self, raw, precision=None, height=None, seed=None, workers=None):
        if not isinstance(raw, dict):
            raise ConfigInvalid("config must be a JSON object")
        self.raw = raw
        fld = raw.get("field")
        if not isinstance(fld, dict) or "minpoly" not in fld:
            raise ConfigInvalid("'field.minpoly' is required")
        budgets = raw.get("budgets", {})
        self.precision = int(precision or budgets.get("precision", 128))
        self.height = height if height is not None else budgets.get("height")
        self.trials = int(budgets.get("trials", 100))
        self.budget = budgets.get("points")
        self.seed = int(seed if seed is not None else raw.get("seed", 0))
        self.workers = int(workers or raw.get("workers", 1))
        mp = [_rational(c, "field.minpoly") for c in fld["minpoly"]]
        self.K = nf_create(mp, self.precision, fld.get("integral_basis"))
        K = self.K
        self.cm_witness = None
        if fld.get("cm_witness") is not None:
            w = fld["cm_witness"]
            d = w.get("d", 1)
            d = [_rational(c, "cm_witness.d") for c in d] if isinstance(d, list) else _rational(d, "cm_witness.d")
            self.cm_witness = ([_rational(c, "cm_witness.minpoly") for c in w["minpoly"]], d)
        self.units = None
        if fld.get("units") is not None:
            self.units = [_element(K, u, "field.units[%d]" % i) for i, u in enumerate(fld["units"])]
        places = raw.get("places")
        if places is None:
            places = [p.to_json() for p in K.archimedean_places()]
        try:
            self.S = PlaceSet(K, [_place(p) for p in places])
        except ConfigInvalid:
            raise
        except LdoError as e:
            raise ConfigInvalid("places: %s" % e)
        self.n = raw.get("n")
        job = raw.get("job")
        if not isinstance(job, dict) or job.get("type") not in JOBS:
            raise ConfigInvalid("'job.type' must be one of %s" % ", ".join(JOBS))
        self.job = job
        self.kind = job["type"]

    def matrices(self, key, count=None):
        if not isinstance(self.n, int) or self.n < 2:
            raise ConfigInvalid("'n' must be an integer >= 2")
        mats = self.job.get(key)
        if not isinstance(mats, list):
            raise ConfigInvalid("job.%s must be a list of matrices" % key)
        out = [_matrix(self.K, self.n, m, "job.%s[%d]" % (key, i)) for i, m in enumerate(mats)]
        if count is not None and len(out) != count:
            raise ConfigInvalid("job.%s: expected %d matrices" % (key, count))
        for i, m in enumerate(out):
            if not m.det().is_one():
                raise ConfigInvalid("job.%s[%d] does not have determinant 1" % (key, i))
        return out


# ---- canonical output ----------------------------------------------------------


def _canon(x):
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float("%.12g" % x)
    if isinstance(x, complex):
        return [_canon(x.real), _canon(x.imag)]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _canon(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_canon(v) for v in x]
    if hasattr(x, "to_json"):
        return _canon(x.to_json())
    if hasattr(x, "item"):
        return _canon(x.item())
    return x


def dumps(obj):
    return json.dumps(_canon(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _versions():
    import numpy
    import mpmath
    import scipy

    return {
        "ldorbits": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "mpmath": mpmath.__version__,
        "scipy": scipy.__version__,
    }


# ---- jobs -------------------------------------------------------------------------


def _job_stratify(cfg, out):
    from .strata import closure_poset

    g1, g2 = cfg.matrices("matrices", 2)
    poset = closure_poset(g1, g2)
    with open(os.path.join(out, "strata.dot"), "w") as fh:
        fh.write(poset.to_dot())
    return poset.to_json()


def _job_predict(cfg, out):
    from .closure3 import maximize_centralizer, systole_scan, TorusPath

    gs = cfg.matrices("matrices")
    if len(gs) != len(cfg.S):
        raise ConfigInvalid("predict-closure needs one matrix per place")
    result = {"prediction": maximize_centralizer(gs, cm_witness=cfg.cm_witness)}
    path = cfg.job.get("path")
    if path is not None:
        tp = TorusPath([[float(_rational(x, "path.rates")) for x in r] for r in path["rates"]],
                       [float(_rational(x, "path.params")) for x in path["params"]])
        reports = systole_scan(gs, cfg.S, tp, int(cfg.height or 10))
        _write_csv(out, ["step", "parameter", "systole", "argmin"],
                   [[r.step, "%.12g" % r.parameter, "%.12g" % r.systole, " ".join(map(str, r.argmin))] for r in reports])
        result["systole"] = [vars(r) for r in reports]
    return result


def _job_units(cfg, out):
    from .sunits import unit_closure_classify, unit_group_build, unit_reduce

    U = unit_group_build(cfg.S, cfg.units)
    mode = cfg.job.get("mode", "classify")
    result = {"unit_group": U}
    if mode == "classify":
        v1 = cfg.S[int(cfg.job.get("place", 0))]
        kw = {"height": cfg.height} if cfg.height else {}
        result["closure"] = unit_closure_classify(U, v1, **kw)
        result["verdict"] = result["closure"].verdict
    elif mode == "reduce":
        a = [float(_rational(x, "job.target")) for x in cfg.job.get("target", [])]
        exps, kappa = unit_reduce(a, U, int(cfg.job.get("m", 1)))
        result.update({"exponents": exps, "kappa": kappa})
    else:
        raise ConfigInvalid("units mode must be classify or reduce")
    return result


def _forms_from(cfg):
    from .forms import DecomposableForm

    fams = cfg.job.get("forms")
    if not isinstance(fams, list) or len(fams) != len(cfg.S):
        raise ConfigInvalid("job.forms needs one family of linear forms per place")
    K = cfg.K
    parsed = [[[_element(K, c, "job.forms") for c in row] for row in fam] for fam in fams]
    alpha = cfg.job.get("alpha")
    alpha = [_rational(a, "job.alpha") for a in alpha] if alpha is not None else None
    return DecomposableForm(cfg.S, parsed, alpha)


def _job_forms(cfg, out):
    from . import forms as fm

    f = _forms_from(cfg)
    mode = cfg.job.get("mode", "probe")
    result = {"proportional": fm.proportionality_test(f)}
    if f.m < f.n_vars:
        f = fm.reduce_to_square(f, cfg.trials, cfg.seed)
        result["reduced"] = f
    if mode == "probe":
        eps = [float(_rational(e, "job.eps")) for e in cfg.job.get("eps", ["1/4"] * len(cfg.S))]
        height = int(cfg.height or 50)
        targets = cfg.job.get("targets")
        if targets is None:
            targets = fm.random_targets(cfg.S, int(cfg.job.get("count", 10)), cfg.seed)
        else:
            targets = [[_rational(x, "job.targets") for x in t] for t in targets]
        rows, probes = [], []
        kw = {"budget": int(cfg.budget)} if cfg.budget else {}
        for i, t in enumerate(targets):
            r = fm.density_probe(f, t, eps, height, **kw)
            probes.append({"target": [str(x) for x in t], "result": r})
            rows.append([i, " ".join(str(x) for x in t), int(r.witness is not None),
                         " ".join(map(str, r.witness or [])), "%.12g" % r.distance])
        _write_csv(out, ["target", "value", "hit", "witness", "distance"], rows)
        hits = sum(1 for p in probes if p["result"].witness is not None)
        result.update({"probes": probes, "hit_fraction": hits / max(1, len(probes))})
        if fm.is_cm_field(cfg.K, cfg.cm_witness) != "no":
            result["warning"] = "field is not known to be non-CM: density may fail for arithmetic reasons"
    elif mode in ("cm-check", "scan"):
        if cfg.cm_witness is None:
            raise ConfigInvalid("cm-check needs field.cm_witness")
        setup = fm.CmSetup(cfg.K, *cfg.cm_witness)
        l = int(cfg.job.get("l", 1))
        if mode == "cm-check":
            z = [_element(cfg.K, x, "job.z") for x in cfg.job.get("z", [])]
            v = fm.cm_bound_check(f, setup, z, l)
            result["check"] = v
            if v.verdict == "violation":
                raise fm.CmBoundViolation("z=%s violates both alternatives" % cfg.job.get("z"))
        else:
            rep = fm.cm_scan(f, setup, int(cfg.height or 10), l, raise_on_violation=False)
            result["scan"] = rep
            _write_csv(out, ["points", "excluded_zero", "artin1", "artin2", "violations", "min_product"],
                       [[rep.points, rep.excluded_zero, rep.artin1, rep.artin2, rep.violations, "%.12g" % rep.min_product]])
            if rep.violations:
                raise fm.CmBoundViolation("%d violations" % rep.violations)
    elif mode == "diagnostic":
        result["diagnostic"] = fm.two_place_diagnostic(f, int(cfg.height or 3))
    else:
        raise ConfigInvalid("unknown forms mode %r" % mode)
    return result


def _job_verify(cfg, out):
    from .verify import run_fuzz

    suite = cfg.job.get("suite", "fuzz")
    if suite != "fuzz":
        raise ConfigInvalid("unknown verify suite %r" % suite)
    rep = run_fuzz(int(cfg.job.get("cases", 10**6)), cfg.seed)
    rep.seconds = {}  # timings would break byte-identical reports
    if rep.alarms:
        with open(os.path.join(out, "report.json"), "w") as fh:
            fh.write(dumps({"schema_version": SCHEMA_VERSION, "job": "verify", "result": rep}))
        raise TheoremViolation("%d alarms in the fuzz suite" % len(rep.alarms))
    return rep


HANDLERS = {
    "stratify": _job_stratify,
    "predict-closure": _job_predict,
    "units": _job_units,
    "forms": _job_forms,
    "verify": _job_verify,
}


def _write_csv(out, header, rows):
    with open(os.path.join(out, "scan.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def run(cfg, out):
    os.makedirs(out, exist_ok=True)
    result = HANDLERS[cfg.kind](cfg, out)
    report = {
        "schema_version": SCHEMA_VERSION,
        "job": cfg.kind,
        "config_sha256": hashlib.sha256(json.dumps(cfg.raw, sort_keys=True).encode()).hexdigest(),
        "seed": cfg.seed,
        "precision": cfg.precision,
        "field": {"minpoly": [str(c) for c in cfg.K.minpoly], "r1": cfg.K.r1, "r2": cfg.K.r2},
        "places": [v.to_json() for v in cfg.S],
        "versions": _versions(),
        "result": result,
    }
    text = dumps(report)
    with open(os.path.join(out, "report.json"), "w") as fh:
        fh.write(text)
    return report


def build_parser():
    p = argparse.ArgumentParser(prog="ldorbits", description=__doc__.splitlines()[0])
    p.add_argument("--config", required=True, help="job description (JSON)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--precision", type=int, help="working precision in bits")
    p.add_argument("--height", type=int, help="search height override")
    p.add_argument("--workers", type=int, help="worker count (currently advisory)")
    p.add_argument("--seed", type=int, help="random seed override")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        print("ConfigInvalid: %s" % e, file=sys.stderr)
        return 1
    try:
        cfg = JobConfig(raw, args.precision, args.height, args.seed, args.workers)
        run(cfg, args.out)
    except TheoremViolation as e:
        print("%s: %s" % (type(e).__name__, e), file=sys.stderr)
        return 2
    except LdoError as e:
        print("%s: %s" % (type(e).__name__, e), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
