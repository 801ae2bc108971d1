"""Command dispatch and structured reports for the verification suite.

Reports are JSON objects ``{command, config, checks, runtime_ms}`` with one
entry per check: ``{name, status, witnesses, dims, matrix, ...}``.  Keys are
sorted and ``runtime_ms`` is pinned to 0, so a fixed seed and configuration
produce byte-identical output.  Exit status: 0 when every check passes, 1
when any check fails (or a run refuses an instance), 2 for usage or
instance-file errors.
"""

import argparse
import json
import sys

from .errors import KTangentError
from .parser import load_instance
from .cech import (Sheaf, TruncationPolicy, sheaf_cohomology,
                   hypercohomology, verify_splitting)
from .complexes import tangent_deligne
from .cycletangent import (formal_tangent_chow, delta_r,
                           composed_infinitesimal, lambda_factorization_check)
from . import suites
from .errors import Unsupported

# built-in instances, written in the instance grammar they exercise
BUILTIN_INSTANCES = {
    "p1": """\
[cover]
kind = projective-line

[policy]
D = 2
delta = 2

[checks]
p = 1
""",
    "p2": """\
[cover]
kind = projective-plane

[policy]
D = 2
delta = 2

[checks]
p = 1
""",
    "elliptic": """\
# the cubic y^2 z = x^3 - x z^2 + z^3
[cover]
kind = plane-curve
weierstrass = 0, -1, 1

[policy]
D = 2
delta = 2

[checks]
p = 1
""",
}


def _load(args):
    name = args.instance or "p1"
    if name in BUILTIN_INSTANCES:
        cfg = load_instance(BUILTIN_INSTANCES[name])
    else:
        try:
            with open(name, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise KTangentError(f"cannot read instance file {name!r}: {exc}")
        cfg = load_instance(text)
    if args.p is not None:
        cfg.p = args.p
    if args.seed is not None:
        cfg.seed = args.seed
    if args.D is not None or args.delta is not None:
        D = args.D if args.D is not None else cfg.policy.D
        delta = args.delta if args.delta is not None else cfg.policy.delta
        cfg.policy = TruncationPolicy(D, delta)
    cfg.checks["instance"] = name
    return cfg


def _parse_sheaf(text):
    t = text.strip()
    if t.startswith("omega"):
        try:
            return Sheaf.forms(int(t[5:] or "0"))
        except ValueError:
            pass
    elif t.startswith("O(") and t.endswith(")"):
        try:
            return Sheaf.twisted(int(t[2:-1]))
        except ValueError:
            pass
    raise Unsupported(f"unknown sheaf {text!r}; use omegaR or O(d)")


def _dims_list(report):
    ks = sorted(report.dims)
    return [report.dims.get(k, 0) for k in range(ks[-1] + 1)] if ks else []


# -- command bodies ----------------------------------------------------------
#
# Each body returns (config-or-None, checks).  Configuration problems are
# raised and exit with status 2; anything that goes wrong while a check
# runs is captured as a structured check with status "error" (exit 1).

def _guard(name, fn):
    try:
        return fn()
    except KTangentError as exc:
        return [{"name": name, "status": "error",
                 "witnesses": [f"{type(exc).__name__}: {exc}"]}]


def _cmd_verify(args):
    what = args.what
    seed = args.seed if args.seed is not None else suites.DEFAULT_SEED
    if what == "lemma2.6":
        return None, _guard(what, lambda: suites.codifferential_suite(args.p, seed))
    if what == "beta-agreement":
        return None, _guard(what, lambda: suites.beta_agreement_suite(args.p, seed))
    if what == "diagram2.7":
        return None, _guard(what, lambda: suites.absolute_square_suite(args.p, seed))
    if what == "alpha-delta":
        return None, _guard(what, lambda: suites.diagram_suite(args.p))
    # lemma2.4: the splitting of the tangent complex over an actual cover
    cfg = _load(args)
    if cfg.cover is None:
        raise Unsupported("the splitting check needs a [cover] instance")
    return cfg, _guard(f"splitting p={cfg.p}",
                       lambda: [verify_splitting(cfg.p, cfg.cover, cfg.policy)])


def _covered(args, command):
    cfg = _load(args)
    if cfg.cover is None:
        raise Unsupported(f"{command} needs a [cover] instance")
    return cfg


def _cmd_cech(args):
    cfg = _covered(args, "cech")
    sheaf = _parse_sheaf(args.sheaf or cfg.checks.get("sheaf", "omega0"))

    def run():
        rep = sheaf_cohomology(cfg.cover, sheaf, cfg.policy)
        check = {"name": f"cech {sheaf.describe()}",
                 "status": "pass" if rep.stabilized else "fail",
                 "dims": _dims_list(rep),
                 "stabilized": rep.stabilized,
                 "representatives": rep.to_dict()["representatives"]}
        if not rep.stabilized:
            check["witnesses"] = [
                f"dims {_dims_list(rep)} moved to "
                f"{sorted(rep.dims_again.items())} at the larger window"]
        return [check]

    return cfg, _guard(f"cech {sheaf.describe()}", run)


def _cmd_hypercoh(args):
    cfg = _covered(args, "hypercoh")

    def run():
        cx = tangent_deligne(cfg.p, cfg.cover.charts[0])
        rep = hypercohomology(cfg.cover, cx, cfg.policy)
        return [{"name": f"hypercohomology p={cfg.p}",
                 "status": "pass" if rep.stabilized else "fail",
                 "dims": {str(k): v for k, v in sorted(rep.dims.items())},
                 "stabilized": rep.stabilized}]

    return cfg, _guard(f"hypercohomology p={cfg.p}", run)


def _cmd_tangent_chow(args):
    cfg = _covered(args, "tangent-chow")

    def run():
        rep = formal_tangent_chow(cfg.cover, cfg.p, cfg.policy)
        return [{"name": f"formal tangent space p={cfg.p}",
                 "status": "pass",
                 "dims": {str(k): v for k, v in sorted(rep.dims.items())},
                 "dim": rep.dim(cfg.p),
                 "representatives": rep.to_dict()["representatives"]}]

    return cfg, _guard(f"formal tangent space p={cfg.p}", run)


def _cmd_delta_r(args):
    cfg = _covered(args, "delta-r")

    def run():
        out = delta_r(cfg.cover, cfg.p, cfg.policy).to_dict()
        out["status"] = "pass"
        return [out]

    return cfg, _guard(f"delta_r p={cfg.p}", run)


def _cmd_composed(args):
    cfg = _covered(args, "composed")

    def run():
        rep = composed_infinitesimal(cfg.cover, cfg.p, cfg.policy)
        out = rep.to_dict()
        out["status"] = "pass" if rep.verdict == "injective" else "fail"
        if out["status"] == "fail":
            out["witnesses"] = [f"kernel dimension {rep.kernel_dim}"]
        return [out]

    return cfg, _guard(f"composed p={cfg.p}", run)


def _cmd_relations(args):
    seed = args.seed if args.seed is not None else suites.DEFAULT_SEED
    return None, _guard("relations", lambda: suites.relations_suite(seed))


_COMMANDS = {
    "verify": _cmd_verify,
    "cech": _cmd_cech,
    "hypercoh": _cmd_hypercoh,
    "tangent-chow": _cmd_tangent_chow,
    "delta-r": _cmd_delta_r,
    "composed": _cmd_composed,
    "relations": _cmd_relations,
}


# -- report assembly ---------------------------------------------------------

def _normalize(check):
    out = {"name": check.get("name", "?"),
           "status": check.get("status", "error"),
           "witnesses": list(check.get("witnesses", [])),
           "dims": check.get("dims"),
           "matrix": check.get("matrix")}
    for k, v in check.items():
        if k not in out:
            out[k] = v
    return out


def _config_echo(cmd_args, cfg):
    config = {}
    if cfg is not None:
        config.update(cfg.describe())
    if getattr(cmd_args, "what", None):
        config["what"] = cmd_args.what
    if getattr(cmd_args, "sheaf", None):
        config["sheaf"] = cmd_args.sheaf
    if cfg is None:
        config["p"] = cmd_args.p if cmd_args.p is not None else "2,3,4"
        seed = cmd_args.seed
        config["seed"] = seed if seed is not None else suites.DEFAULT_SEED
    return config


def make_report(command, config, checks):
    return {"command": command, "config": config,
            "checks": [_normalize(c) for c in checks], "runtime_ms": 0}


def render_json(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _print_human(report, out):
    for c in report["checks"]:
        line = f"[{c['status']}] {c['name']}"
        if c.get("count") is not None:
            line += f" ({c['count']} instances)"
        if c.get("dims") is not None:
            line += f" dims={c['dims']}"
        if c.get("verdict"):
            line += f" verdict={c['verdict']}"
        if c.get("stabilized") is not None:
            line += f" stabilized={c['stabilized']}"
        print(line, file=out)
        for w in c.get("witnesses", []):
            print(f"    witness: {w}", file=out)
    n = len(report["checks"])
    good = sum(1 for c in report["checks"] if c["status"] == "pass")
    print(f"{good}/{n} checks passed", file=out)


# -- entry point -------------------------------------------------------------

def _add_common(sp):
    sp.add_argument("--instance", help="built-in name (p1, p2, elliptic) or instance file")
    sp.add_argument("--p", type=int, help="weight / symbol length")
    sp.add_argument("--D", type=int, help="truncation window size")
    sp.add_argument("--delta", type=int, help="window growth for the stability check")
    sp.add_argument("--seed", type=int, help="seed for randomized families")
    sp.add_argument("--json", help="write the JSON report to this path ('-' for stdout)")
    sp.add_argument("--quiet", action="store_true", help="suppress the human-readable summary")


def build_arg_parser():
    ap = argparse.ArgumentParser(
        prog="ktangent",
        description="exact verification of symbol maps, Cech cohomology, "
                    "and tangent-space comparisons")
    sub = ap.add_subparsers(dest="command", required=True)
    vp = sub.add_parser("verify", help="run one of the identity suites")
    vp.add_argument("what", choices=["lemma2.6", "beta-agreement",
                                     "diagram2.7", "alpha-delta", "lemma2.4"])
    _add_common(vp)
    for name, help_text in (
            ("cech", "sheaf cohomology dimensions on a cover"),
            ("hypercoh", "hypercohomology of the tangent complex"),
            ("tangent-chow", "formal tangent space of the cycle group"),
            ("delta-r", "the map out of the formal tangent space"),
            ("composed", "the composed infinitesimal regulator map"),
            ("relations", "symbol relations die under the form maps")):
        sp = sub.add_parser(name, help=help_text)
        if name == "cech":
            sp.add_argument("--sheaf", help="omegaR or O(d); default omega0")
        _add_common(sp)
    return ap


def main(argv=None):
    ap = build_arg_parser()
    args = ap.parse_args(argv)
    body = _COMMANDS[args.command]
    command = args.command if args.command != "verify" else f"verify {args.what}"
    try:
        cfg, checks = body(args)
    except KTangentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = make_report(command, _config_echo(args, cfg), checks)
    payload = render_json(report)
    if args.json == "-":
        sys.stdout.write(payload)
    elif args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(payload)
    if not args.quiet and args.json != "-":
        _print_human(report, sys.stdout)
    return 0 if all(c["status"] == "pass" for c in report["checks"]) else 1


if __name__ == "__main__":
    sys.exit(main())
