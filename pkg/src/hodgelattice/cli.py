"""Command-line front end: ``hodge-lattice <subcommand> --input doc.json``.

Exit codes: 0 success or PASS, 1 verdict FAIL, 2 input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .asymnorm import ModelMetric, Region, boundedness_ratio, model_norm_z
from .cyclotomic import CycScalar
from .document import (
    SCHEMA_VERSION,
    DocumentError,
    InputDocument,
    dumps,
    encode_scalar,
    load_document,
)
from .exactlin import ExactMatrix
from .hodgenum import NilpotentOrbitVHS, orbit_hodge_metric
from .l2decide import decide, laurent_integrability, reduce_quasi_unipotent
from .lattice import CanonicalFrame, FrameNotAdaptedError, canonical_frame, residues
from .laurent import LaurentSection
from .monodromy import LogDecomposition, MonodromyError, log_decomposition, validate_tuple
from .quadrature import QuadConfig, log_weighted_disk_integral, section_l2_estimate
from .weight import check_axioms, multi_grading, weight_filtration

__all__ = ["main", "run", "RunConfig", "InputError"]

log = logging.getLogger("hodgelattice")

SUBCOMMANDS = ("validate", "log", "lattice", "weights", "norm", "decide", "quadcheck", "compare")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tol: float = 1e-4
    center: int = 0


# building objects from a document -----------------------------------------


def _logs(doc: InputDocument) -> LogDecomposition:
    try:
        return log_decomposition(validate_tuple(list(doc.matrices)))
    except MonodromyError as exc:
        raise InputError(f"$.matrices: {exc}") from None


def _frame(doc: InputDocument, logs: LogDecomposition) -> CanonicalFrame:
    basis = doc.section.basis if doc.section is not None else "standard"
    return canonical_frame(logs, basis)


def _section(doc: InputDocument, frame: CanonicalFrame) -> LaurentSection:
    if doc.section is None:
        raise InputError("$.section: missing (required by this subcommand)")
    coeffs: dict[int, dict] = {}
    for t in doc.section.terms:
        c = CycScalar.gaussian(t.re, t.im) if t.im else CycScalar.rational(t.re)
        poly = coeffs.setdefault(t.alpha - 1, {})
        poly[t.exponents] = poly[t.exponents] + c if t.exponents in poly else c
    return LaurentSection(frame, coeffs, symbolic_tail=doc.section.symbolic_tail)


def _vhs(doc: InputDocument, logs: LogDecomposition) -> NilpotentOrbitVHS | None:
    if doc.vhs is None:
        return None
    v = doc.vhs
    r = doc.rank
    flag = {}
    for p, idx in v.flag:
        cols = [tuple(1 if i == c - 1 else 0 for i in range(r)) for c in idx]
        flag[p] = ExactMatrix.from_columns(cols, nrows=r, order=1)
    nils = v.nilpotents if v.nilpotents is not None else tuple(logs.N)
    try:
        return NilpotentOrbitVHS(weight=v.weight, S=v.polarization, flag=flag, nilpotents=nils)
    except ValueError as exc:
        raise InputError(f"$.vhs: {exc}") from None


def _model(doc: InputDocument, nils, cfg: RunConfig) -> ModelMetric:
    try:
        return ModelMetric(multi_grading(list(nils), doc.Q, cfg.center))
    except ValueError as exc:
        raise InputError(f"$.Q: {exc}") from None


def _points(doc: InputDocument) -> np.ndarray:
    if doc.points is None:
        raise InputError("$.points: missing (required by this subcommand)")
    pts = np.array([[complex(float(re), float(im)) for re, im in pt] for pt in doc.points])
    if np.any(pts.imag <= 0):
        raise InputError("$.points: every coordinate needs a positive imaginary part")
    return pts


def _vectors(doc: InputDocument) -> np.ndarray:
    if doc.vectors is None:
        return np.eye(doc.rank, dtype=complex)
    return np.array([v.to_numpy()[:, 0] for v in doc.vectors])


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _enc(m: ExactMatrix) -> list:
    return [[encode_scalar(e) for e in row] for row in m.tolist()]


# subcommands --------------------------------------------------------------


@dataclass
class Outcome:
    code: int
    report: dict
    summary: list[str]


def cmd_validate(doc: InputDocument, cfg: RunConfig) -> Outcome:
    try:
        tup = validate_tuple(list(doc.matrices))
    except MonodromyError as exc:
        raise InputError(f"$.matrices: {exc}") from None
    report = {
        "rank": tup.rank,
        "n": tup.n,
        "indices": list(tup.indices),
        "unipotent": tup.is_unipotent(),
        "field_order": tup.order,
    }
    summary = [f"m = [{', '.join(str(m) for m in tup.indices)}]", f"unipotent: {tup.is_unipotent()}"]
    return Outcome(0, report, summary)


def cmd_log(doc: InputDocument, cfg: RunConfig) -> Outcome:
    logs = _logs(doc)
    per = []
    summary = []
    ok = True
    for j, lg in enumerate(logs.logs):
        rebuilt = lg.reconstruct() == logs.tuple.matrices[j]
        ok = ok and rebuilt
        per.append(
            {
                "j": j + 1,
                "m": lg.m,
                "A": _enc(lg.A),
                "N": _enc(lg.N),
                "blocks": [{"k": b.k, "m": b.m, "dim": b.dim, "exponent": _frac(b.exponent)} for b in lg.table],
                "reconstructs": rebuilt,
            }
        )
        summary.append(f"j={j + 1}: m={lg.m}, eigenvalue exponents {[_frac(b.exponent) for b in lg.table]}, exp(log) exact: {rebuilt}")
    return Outcome(0 if ok else 1, {"logs": per, "field_order": logs.order}, summary)


def cmd_lattice(doc: InputDocument, cfg: RunConfig) -> Outcome:
    logs = _logs(doc)
    res = residues(logs)
    per = []
    summary = []
    for j, d in enumerate(res.per_divisor):
        vals = [e for e, _ in d.eigenvalues]
        per.append(
            {
                "j": j + 1,
                "eigenvalues": [{"value": _frac(e), "multiplicity": mult} for e, mult in d.eigenvalues],
                "contained": d.contained,
                "charpoly_verified": d.charpoly_verified,
                "commutes": d.commutes,
            }
        )
        summary.append(f"j={j + 1}: residue eigenvalues [{', '.join(_frac(e) for e in vals)}]")
    verdict = "PASS" if res.contained else "FAIL"
    summary.append(f"containment in (-1, 0]: {verdict}")
    return Outcome(0 if res.contained else 1, {"residues": per, "contained": res.contained}, summary)


def cmd_weights(doc: InputDocument, cfg: RunConfig) -> Outcome:
    logs = _logs(doc)
    per = []
    summary = []
    ok = True
    for j, nil in enumerate(logs.N):
        w = weight_filtration(nil, cfg.center)
        ax = check_axioms(w)
        ok = ok and all(ax.values())
        dims = w.graded_dims()
        per.append({"j": j + 1, "graded_dims": {str(k): v for k, v in dims.items()}, "axioms": ax})
        summary.append(f"W(N_{j + 1}) graded dims {dims}, axioms {'PASS' if all(ax.values()) else 'FAIL'}")
    report = {"filtrations": per}
    try:
        g = multi_grading(logs.N, doc.Q, cfg.center)
        report["grading"] = {",".join(str(x) for x in l): d for l, d in g.dims().items()}
        summary.append(f"multigrading dims {g.dims()}")
    except ValueError as exc:
        report["grading"] = None
        report["grading_error"] = str(exc)
        summary.append(f"multigrading: {exc}")
    return Outcome(0 if ok else 1, report, summary)


def cmd_norm(doc: InputDocument, cfg: RunConfig) -> Outcome:
    logs = _logs(doc)
    pts = _points(doc)
    vecs = _vectors(doc)
    model = _model(doc, logs.N, cfg)
    vhs = _vhs(doc, logs)
    rows = []
    summary = []
    for k, z in enumerate(pts):
        m = model_norm_z(model, vecs, z[None, :])
        row = {"point": k + 1, "model": [float(x) for x in m]}
        line = f"point {k + 1}: model {np.array2string(np.asarray(m), precision=6)}"
        if vhs is not None:
            sample = orbit_hodge_metric(vhs, z)
            row["valid"] = sample.valid
            if sample.valid:
                t = [sample.norm_sq(v) for v in vecs]
                row["true"] = t
                line += f", true {np.array2string(np.asarray(t), precision=6)}"
            else:
                row["true"] = None
                line += f", true metric undefined ({sample.diagnostics})"
        rows.append(row)
        summary.append(line)
    return Outcome(0, {"norms": rows}, summary)


def _decide_doc(doc: InputDocument, cfg: RunConfig):
    logs = _logs(doc)
    frame = _frame(doc, logs)
    section = _section(doc, frame)
    reduction = None
    if not frame.is_unipotent():
        try:
            reduction = reduce_quasi_unipotent(section, frame)
        except FrameNotAdaptedError:
            raise InputError("$.section.basis: frame not adapted; quasi-unipotent input needs basis 'adapted'") from None
        section, frame = reduction.section, reduction.frame
    return decide(section, frame, Q=doc.Q, center=cfg.center), reduction, section, frame


def cmd_decide(doc: InputDocument, cfg: RunConfig) -> Outcome:
    rep, reduction, _, _ = _decide_doc(doc, cfg)
    impl = rep.implication
    report = {
        "certificates": [c.as_dict() for c in rep.certificates],
        "lattice_exponents": [
            {"alpha": a + 1, "j": j + 1, "n": e} for (a, j), e in sorted(rep.lattice_exponents.items())
        ],
        "is_L2": rep.is_L2,
        "in_lattice": rep.in_lattice,
        "in_lowest_piece": rep.in_lowest_piece,
        "boundary": rep.boundary,
        "implication": {"passed": impl.passed, "excluded": impl.excluded},
    }
    ok = rep.is_L2 and rep.in_lattice and impl.passed
    summary = [f"in_lattice={str(rep.in_lattice).lower()} is_L2={str(rep.is_L2).lower()} boundary={str(rep.boundary).lower()}"]
    if reduction is not None:
        equiv = reduction.equivalence_holds() and reduction.original_in_lattice() == rep.in_lattice
        ok = ok and equiv
        report["reduction"] = {
            "cells": [
                {"alpha": a + 1, "j": j + 1, "n": n, "m": m, "k": k, "cover_exponent": c}
                for (a, j), (n, m, k, c) in sorted(reduction.exponents.items())
            ],
            "equivalence": equiv,
        }
        summary.append(f"reduced to the unipotent cover; exponent equivalence {'holds' if equiv else 'FAILS'}")
    for c in rep.certificates:
        tag = "convergent" if c.convergent else "divergent"
        if c.boundary:
            tag += " (boundary)"
        summary.append(f"certificate alpha={c.alpha + 1} j={c.j + 1} l={c.degree} n={c.exponent}: {tag}")
    summary.append(f"implication check: {'PASS' if impl.passed else 'FAIL'}{' (excluded: boundary)' if impl.excluded else ''}")
    return Outcome(0 if ok else 1, report, summary)


def cmd_quadcheck(doc: InputDocument, cfg: RunConfig) -> Outcome:
    qcfg = QuadConfig(tol=cfg.tol)
    rows = []
    summary = []
    agree = True
    if doc.section is None:
        cells = [(k, i, None) for k in range(-3, 4) for i in range(-2, 3)]
    else:
        rep, _, section, frame = _decide_doc(doc, cfg)
        cells = [(c.degree, c.exponent, c) for c in rep.certificates]
    for k, i, cert in cells:
        sym, bd = laurent_integrability(k, i)
        q = log_weighted_disk_integral(k, i, config=qcfg)
        match = (q.classification == "convergent") == sym and q.classification != "inconclusive"
        agree = agree and match
        row = {"l": k, "n": i, "symbolic": sym, "boundary": bd, "numeric": q.classification, "agree": match}
        if cert is not None:
            row["alpha"], row["j"] = cert.alpha + 1, cert.j + 1
        rows.append(row)
        summary.append(f"l={k:+d} n={i:+d}: symbolic {'conv' if sym else 'div '} numeric {q.classification}{' boundary' if bd else ''}{'' if match else '  MISMATCH'}")
    report = {"cells": rows}
    if doc.section is not None:
        estimates = {}
        try:
            model = ModelMetric(multi_grading(frame.logs.N, doc.Q, cfg.center))
            estimates["model"] = section_l2_estimate(section, model, config=qcfg if frame.n == 1 else None)
        except ValueError as exc:
            report["model_error"] = str(exc)
        vhs = _vhs(doc, frame.logs)
        if vhs is not None and frame.n == 1 and vhs.n == 1:
            estimates["hodge"] = section_l2_estimate(section, vhs, config=qcfg)
        report["estimates"] = {}
        for name, est in estimates.items():
            judged = not rep.boundary
            match = (est.classification == "convergent") == rep.is_L2 if judged else None
            if judged:
                agree = agree and bool(match)
            report["estimates"][name] = dict(est.as_dict(), agree_with_is_L2=match)
            summary.append(f"section L2 estimate ({name} metric): {est.classification}; decide says is_L2={rep.is_L2}")
    report["agree"] = agree
    summary.append(f"oracle agreement: {'PASS' if agree else 'FAIL'}")
    return Outcome(0 if agree else 1, report, summary)


def cmd_compare(doc: InputDocument, cfg: RunConfig) -> Outcome:
    logs = _logs(doc)
    vhs = _vhs(doc, logs)
    if vhs is None:
        raise InputError("$.vhs: missing (required by compare)")
    if doc.region is None:
        raise InputError("$.region: missing (required by compare)")
    model = _model(doc, vhs.nilpotents, cfg)
    region = Region(float(doc.region.a), float(doc.region.epsilon), doc.n)
    vecs = _vectors(doc)
    rep = boundedness_ratio(vhs, model, region, vecs, samples=doc.region.samples, seed=cfg.seed)
    report = {
        "min_ratio": rep.min_ratio,
        "max_ratio": rep.max_ratio,
        "per_vector": [{"vector": k + 1, "min": lo, "max": hi} for k, (lo, hi) in enumerate(rep.per_vector)],
        "samples": rep.samples,
        "excluded": rep.excluded,
        "seed": cfg.seed,
        "passed": rep.passed,
    }
    summary = [f"vector {k + 1}: ratio in [{lo:.6g}, {hi:.6g}]" for k, (lo, hi) in enumerate(rep.per_vector)]
    summary.append(f"{rep.samples} samples, {rep.excluded} excluded; mutual boundedness {'PASS' if rep.passed else 'FAIL'}")
    return Outcome(0 if rep.passed else 1, report, summary)


COMMANDS: dict[str, Callable[[InputDocument, RunConfig], Outcome]] = {
    "validate": cmd_validate,
    "log": cmd_log,
    "lattice": cmd_lattice,
    "weights": cmd_weights,
    "norm": cmd_norm,
    "decide": cmd_decide,
    "quadcheck": cmd_quadcheck,
    "compare": cmd_compare,
}


def run(subcommand: str, path: str, cfg: RunConfig = RunConfig()) -> tuple[int, dict, list[str]]:
    """Run a subcommand on a document; returns (exit code, report, summary lines)."""
    try:
        doc = load_document(path)
        out = COMMANDS[subcommand](doc, cfg)
    except (DocumentError, InputError) as exc:
        return 2, {"error": str(exc)}, [f"input error: {exc}"]
    except OSError as exc:
        return 2, {"error": str(exc)}, [f"input error: {exc}"]
    report = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": subcommand,
        "exit_code": out.code,
        "result": out.report,
    }
    return out.code, report, out.summary


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="hodge-lattice", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--input", required=True, help="input document (JSON)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, default=1e-4)
    parser.add_argument("--report", help="write the machine-readable report here")
    parser.add_argument("--center", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="print the machine-readable report instead of the summary")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    cfg = RunConfig(seed=args.seed, tol=args.tol, center=args.center)
    code, report, summary = run(args.subcommand, args.input, cfg)
    text = dumps(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json:
        sys.stdout.write(text)
    else:
        stream = sys.stderr if code == 2 else sys.stdout
        for line in summary:
            print(line, file=stream)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
