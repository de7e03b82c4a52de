"""hopfsmith command line: basis listings, coproduct tables and verification suites.

Exit status is 0 when everything checked passes, 1 on a verification failure
and 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import cartan_algebras as ca
from . import quantized_hopf as qh
from .coefficients import PolyPRing, check_odd_prime
from .combinatorics import check_identity_suite
from .errors import ConfigError, HopfsmithError, UnknownGenerator
from .pbw import Element, _coeff_str, _legs_key, one_minus_power
from .twist_engine import (
    TwistSpec,
    build_F,
    build_Finv,
    carrier_twist_report,
    check_twist_axiom,
    cybe_report,
    jordanian_equivalence,
)

SUITES = ("twist-axiom", "hopf-axioms", "hopf-ideal", "oracle", "identities", "all")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    p: int | str
    n: int
    q: int
    twist: str
    trunc: int
    seed: int
    format: str
    variant: str
    prime_variant: bool = False
    sl: bool = False
    max_degree: int = 3

    @property
    def char0(self) -> bool:
        return self.p == "char0"

    def spec(self) -> TwistSpec:
        return TwistSpec.parse(self.twist)


def make_config(args) -> RunConfig:
    if args.n < 2:
        raise ConfigError("n must be at least 2")
    if args.char0:
        if args.sl or args.prime_variant:
            raise ConfigError("--sl and --prime-variant need a prime p")
        if args.trunc < 1:
            raise ConfigError("--trunc must be at least 1")
        p = "char0"
        q = 0
    else:
        p = check_odd_prime(args.p)
        q = args.q % p
    twist = args.twist or ("horizontal:1,2,3" if args.sl else "vertical:1,2")
    cfg = RunConfig(p=p, n=args.n, q=q, twist=twist, trunc=args.trunc, seed=args.seed,
                    format=args.format, variant=args.variant,
                    prime_variant=args.prime_variant, sl=args.sl,
                    max_degree=args.max_degree)
    cfg.spec().check_indices(cfg.n)
    return cfg


# --------------------------------------------------------------------------
# serialization


def plain(x):
    """JSON-safe copy: tuples become lists, exact scalars become strings."""
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


def _monomial_json(m, gen_id) -> list:
    out = []
    for g in m:
        if out and out[-1][0] == g:
            out[-1][1] += 1
        else:
            out.append([g, 1])
    return [[gen_id(g), e] for g, e in out]


def element_json(x: Element) -> list:
    """[{coeff, monomial}] for rank 1, [{coeff, legs: [monomial, ...]}] for tensors."""
    gen_id = x.alg.lie.gen_id
    rows = []
    for legs, c in sorted(x.coefficients().items(), key=lambda kv: _legs_key(kv[0])):
        monos = [_monomial_json(m, gen_id) for m in legs]
        rec = {"coeff": _coeff_str(c)}
        if x.rank == 1:
            rec["monomial"] = monos[0]
        else:
            rec["legs"] = monos
        rows.append(rec)
    return rows


# --------------------------------------------------------------------------
# setups


def _setup(cfg: RunConfig, restricted: bool = True) -> qh.Setup:
    if cfg.char0:
        return qh.char0_setup(cfg.n, cfg.trunc)
    if cfg.sl:
        return qh.sl_setup(cfg.p, cfg.n, cfg.q)
    return qh.modular_setup(cfg.p, cfg.n, cfg.q, restricted=restricted,
                            prime_variant=cfg.prime_variant)


def _gens(cfg: RunConfig, setup: qh.Setup) -> list:
    if cfg.char0:
        return qh.char0_generators(setup.lie, cfg.max_degree)
    return list(setup.ctx.gens)


def _closed(cfg: RunConfig, setup: qh.Setup, spec: TwistSpec) -> qh.ClosedForm:
    cf = qh.ClosedForm(setup.ctx, spec, variant=cfg.variant)
    if cfg.prime_variant:
        cf.extra_gens = qh.special_extras(cf)
    return cf


# --------------------------------------------------------------------------
# commands


def cmd_basis(cfg: RunConfig) -> tuple:
    if cfg.char0:
        lie = ca.ShiftedSpecialAlgebra(cfg.n)
        keys = qh.char0_generators(lie, cfg.max_degree)
        rows = [{"label": lie.label(k), "gen_id": lie.gen_id(k)} for k in keys]
        name = f"S+ (n={cfg.n}, coefficient degree <= {cfg.max_degree})"
    elif cfg.sl:
        lie = ca.MatrixLieAlgebra(cfg.n, cfg.p)
        rows = [{"label": lie.label(g), "gen_id": lie.gen_id(g)} for g in lie.generators()]
        name = f"sl_{cfg.n} p={cfg.p}"
    else:
        tags = ca.enumerate_S_basis(cfg.p, cfg.n, cfg.prime_variant)
        rows = [{"label": ca.tag_label(t), "gen_id": ca.tag_gen_id(t)} for t in tags]
        name = f"{'S′' if cfg.prime_variant else 'S'}({cfg.n};1) p={cfg.p}"
    return {"tables": {"algebra": name, "dimension": len(rows), "basis": rows}}, True


_CARRIER = ("h", "e", "f")


def _select(cfg: RunConfig, setup: qh.Setup, spec: TwistSpec, names) -> list:
    """[(label, Element)] for the requested generators, all generators by default."""
    lie, alg = setup.lie, setup.alg
    gens = _gens(cfg, setup)
    by_label = {lie.label(g): g for g in gens}
    if not names:
        return [(lie.label(g), g) for g in gens]
    out = []
    for name in names:
        if name in _CARRIER:
            if len(spec.chain()) != 1:
                raise ConfigError("carrier selectors need a single-factor twist")
            h, e = setup.ctx.carrier(spec)
            x = {"h": h, "e": e, "f": one_minus_power(e, -1) if not cfg.char0 else None}[name]
            if x is None:
                raise ConfigError("f is not available in characteristic 0")
            out.append((name, x))
        elif name in by_label:
            out.append((name, by_label[name]))
        else:
            raise UnknownGenerator(f"unknown generator {name!r}")
    return out


def cmd_coproduct(cfg: RunConfig, names, source: str = "closed") -> tuple:
    if cfg.sl and not names and cfg.n == 3:
        return {"tables": {"sl3": qh.sl3_table(cfg.p, cfg.q)}}, True
    setup = _setup(cfg)
    spec = cfg.spec()
    if source == "oracle":
        H = qh.conjugation_structure(setup.ctx, spec)
    else:
        H = _closed(cfg, setup, spec).structure()
    label = setup.lie.label
    elements = []
    for name, g in _select(cfg, setup, spec, names):
        if isinstance(g, Element):
            d, s, e = H.delta(g), H.antipode(g), H.counit(g)
        else:
            d, s, e = H.delta.image_gen(g), H.antipode.image_gen(g), H.counit.image_gen(g)
        rec = {"generator": name, "delta": element_json(d), "antipode": element_json(s),
               "counit": element_json(e)}
        if cfg.format == "text":
            rec["text"] = {"delta": d.format(label), "antipode": s.format(label),
                           "counit": e.format(label)}
        elements.append(rec)
    return {"elements": elements}, True


def _skip(why: str) -> dict:
    return {"pass": True, "skipped": why}


def suite_twist_axiom(cfg: RunConfig) -> dict:
    setup = _setup(cfg)
    spec = cfg.spec()
    rep = check_twist_axiom(setup.ctx, build_F(setup.ctx, spec), build_Finv(setup.ctx, spec))
    rep["spec"] = spec.label()
    return rep


def suite_hopf_axioms(cfg: RunConfig) -> dict:
    setup = _setup(cfg)
    H = _closed(cfg, setup, cfg.spec()).structure()
    return qh.hopf_axiom_suite(H, _gens(cfg, setup), well_defined=not cfg.char0)


def suite_hopf_ideal(cfg: RunConfig) -> dict:
    if cfg.char0:
        return _skip("no restricted ideal in characteristic 0")
    if cfg.sl or cfg.prime_variant:
        return _skip("ideal closure is implemented for S(n;1)")
    return qh.hopf_ideal_check(cfg.p, cfg.n, cfg.spec(), cfg.q, variant=cfg.variant)


def suite_oracle(cfg: RunConfig) -> dict:
    setup = _setup(cfg)
    return qh.oracle_report(setup, cfg.spec(), _gens(cfg, setup), variant=cfg.variant)


def suite_identities(cfg: RunConfig, samples=None) -> dict:
    ident = check_identity_suite(cfg.seed, samples=samples)
    rep = {"shifted_factorials": {"pass": all(v["pass"] for v in ident.values()), **ident},
           "jordanian": jordanian_equivalence(6),
           "cybe": cybe_report()}
    if not cfg.char0:
        # on the bare carrier e is not nilpotent, so these need t^p = 0
        rep["carrier_twists"] = carrier_twist_report(PolyPRing(cfg.p, 0))
    rep["pass"] = all(v["pass"] for v in rep.values())
    return rep


SUITE_FNS = {
    "twist-axiom": suite_twist_axiom,
    "hopf-axioms": suite_hopf_axioms,
    "hopf-ideal": suite_hopf_ideal,
    "oracle": suite_oracle,
    "identities": suite_identities,
}


def cmd_verify(cfg: RunConfig, suites, distinct_chains: bool = False, samples=None) -> tuple:
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES)}")
    if not suites:
        suites = [] if distinct_chains else ["all"]
    if "all" in suites:
        suites = [s for s in SUITES if s != "all"]
    report = {}
    for name in suites:
        if name == "identities":
            report[name] = suite_identities(cfg, samples)
        else:
            report[name] = SUITE_FNS[name](cfg)
    if distinct_chains:
        if cfg.char0 or cfg.sl:
            raise ConfigError("--distinct-chains needs S(n;1) at a prime p")
        report["distinct-chains"] = qh.distinct_structures(cfg.n, cfg.p, cfg.q)
    ok = all(r["pass"] for r in report.values())
    report["pass"] = ok
    return {"report": report}, ok


# --------------------------------------------------------------------------
# driver


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="odd prime")
    common.add_argument("--n", type=int, default=2, help="number of variables")
    common.add_argument("--q", type=int, default=0, help="t^p = q t in the coefficient ring")
    common.add_argument("--char0", action="store_true", help="characteristic 0 with S+")
    common.add_argument("--trunc", type=int, default=4, help="t-truncation in characteristic 0")
    common.add_argument("--max-degree", type=int, default=3,
                        help="coefficient degree bound for S+ generators")
    common.add_argument("--twist", default=None,
                        help="vertical:k,k' | horizontal:k,k',m | zeta:i | products joined by *")
    common.add_argument("--sl", action="store_true", help="use sl_n instead of S(n;1)")
    common.add_argument("--prime-variant", action="store_true", help="use S'(n;1)")
    common.add_argument("--variant", choices=qh.VARIANTS, default="corrected",
                        help="coefficient variant of the vertical closed form")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out", default=None, help="also write the JSON document here")

    parser = argparse.ArgumentParser(prog="hopfsmith", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("basis", parents=[common], help="list the enumerated Lie basis")
    cp = sub.add_parser("coproduct", parents=[common], help="Δ, S, ε of generators")
    cp.add_argument("--gen", action="append", default=[],
                    help="generator label, or h / e / f for the carrier (repeatable)")
    cp.add_argument("--source", choices=("closed", "oracle"), default="closed")
    vp = sub.add_parser("verify", parents=[common], help="run verification suites")
    vp.add_argument("suites", nargs="*", metavar="SUITE", help=" | ".join(SUITES))
    vp.add_argument("--distinct-chains", action="store_true",
                    help="witnesses that the zeta chain twists give different coproducts")
    vp.add_argument("--samples", type=int, default=None,
                    help="random samples per identity (exhaustive when omitted)")
    return parser


def _render_text(doc: dict) -> str:
    lines = []
    if "tables" in doc and "basis" in doc["tables"]:
        t = doc["tables"]
        lines.append(f"dim {t['algebra']} = {t['dimension']}")
        lines.extend(f"{i:4d}  {row['label']}" for i, row in enumerate(t["basis"]))
    elif "elements" in doc:
        for rec in doc["elements"]:
            txt = rec["text"]
            lines.append(f"Δ({rec['generator']}) = {txt['delta']}")
            lines.append(f"S({rec['generator']}) = {txt['antipode']}")
            lines.append(f"ε({rec['generator']}) = {txt['counit']}")
    elif "tables" in doc:
        for name, row in doc["tables"]["sl3"]["rows"].items():
            flags = ", ".join(f"{k}={v}" for k, v in row.items() if k != "witness")
            lines.append(f"{name}: {flags}")
    else:
        for name, rep in doc["report"].items():
            if name == "pass":
                continue
            status = "skip" if rep.get("skipped") else ("pass" if rep["pass"] else "FAIL")
            lines.append(f"{name}: {status}")
        lines.append("overall: " + ("pass" if doc["report"]["pass"] else "FAIL"))
    return "\n".join(lines)


def run(argv=None) -> tuple:
    """(exit status, document) without printing; used by main and the tests."""
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        if args.command == "basis":
            body, ok = cmd_basis(cfg)
        elif args.command == "coproduct":
            body, ok = cmd_coproduct(cfg, args.gen, args.source)
        else:
            body, ok = cmd_verify(cfg, args.suites, args.distinct_chains, args.samples)
    except (HopfsmithError, NotImplementedError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        return EXIT_CONFIG, {"error": msg}
    doc = plain({"config": asdict(cfg), **body})
    return (EXIT_OK if ok else EXIT_FAIL), doc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    status, doc = run(argv)
    if "error" in doc:
        print(f"error: {doc['error']}", file=sys.stderr)
        return status
    text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.format == "json":
        print(text)
    else:
        print(_render_text(doc))
    return status


if __name__ == "__main__":
    sys.exit(main())
