"""Input documents and deterministic report serialization.

An input document is JSON.  Matrix entries are elements of Q(zeta_M):
either a plain integer or ``{"num": [c_0, c_1, ...], "den": d}`` meaning
(sum_e c_e zeta_M^e) / d.  Rationals elsewhere are ``[num, den]`` pairs.
All indices in documents are 1-based.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .cyclotomic import CycScalar
from .exactlin import ExactMatrix

__all__ = [
    "SCHEMA_VERSION",
    "DocumentError",
    "VHSBlock",
    "SectionTerm",
    "SectionBlock",
    "RegionBlock",
    "InputDocument",
    "parse_document",
    "load_document",
    "document_to_json",
    "dumps",
    "encode_scalar",
]

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass(frozen=True)
class VHSBlock:
    weight: int
    polarization: ExactMatrix
    flag: tuple[tuple[int, tuple[int, ...]], ...]  # (p, 1-based standard basis indices spanning F^p)
    nilpotents: tuple[ExactMatrix, ...] | None = None


@dataclass(frozen=True)
class SectionTerm:
    alpha: int  # 1-based
    exponents: tuple[int, ...]
    re: Fraction
    im: Fraction = Fraction(0)


@dataclass(frozen=True)
class SectionBlock:
    basis: str
    terms: tuple[SectionTerm, ...]
    symbolic_tail: bool = False


@dataclass(frozen=True)
class RegionBlock:
    a: Fraction
    epsilon: Fraction
    samples: int = 1000


@dataclass(frozen=True)
class InputDocument:
    rank: int
    n: int
    cyclotomic_order: int
    matrices: tuple[ExactMatrix, ...]
    vhs: VHSBlock | None = None
    section: SectionBlock | None = None
    region: RegionBlock | None = None
    Q: ExactMatrix | None = None
    points: tuple[tuple[tuple[Fraction, Fraction], ...], ...] | None = None
    vectors: tuple[ExactMatrix, ...] | None = None
    schema_version: int = SCHEMA_VERSION


# parsing ---------------------------------------------------------------


def _req(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise DocumentError(path, "expected an object")
    if key not in obj:
        raise DocumentError(f"{path}.{key}", "missing")
    return obj[key]


def _int(x, path: str, minimum: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(path, "expected an integer")
    if minimum is not None and x < minimum:
        raise DocumentError(path, f"must be at least {minimum}")
    return x


def _rational(x, path: str) -> Fraction:
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, list) and len(x) == 2:
        num = _int(x[0], f"{path}[0]")
        den = _int(x[1], f"{path}[1]")
        if den <= 0:
            raise DocumentError(f"{path}[1]", "denominator must be positive")
        return Fraction(num, den)
    raise DocumentError(path, "expected an integer or a [num, den] pair")


def _scalar(x, order: int, path: str) -> CycScalar:
    if isinstance(x, int) and not isinstance(x, bool):
        return CycScalar.rational(x, order)
    if isinstance(x, dict):
        num = _req(x, "num", path)
        if not isinstance(num, list) or not num:
            raise DocumentError(f"{path}.num", "expected a non-empty list of integers")
        coeffs = [_int(c, f"{path}.num[{i}]") for i, c in enumerate(num)]
        den = _int(x.get("den", 1), f"{path}.den", minimum=1)
        extra = set(x) - {"num", "den"}
        if extra:
            raise DocumentError(path, f"unknown keys {sorted(extra)}")
        # reduce modulo the cyclotomic polynomial through the constructor
        return CycScalar([Fraction(c, den) for c in coeffs], order)
    raise DocumentError(path, "expected an integer or {num, den}")


def _matrix(x, rows: int, cols: int | None, order: int, path: str) -> ExactMatrix:
    if not isinstance(x, list) or len(x) != rows:
        raise DocumentError(path, f"expected a list of {rows} rows")
    data = []
    for i, row in enumerate(x):
        if not isinstance(row, list) or (cols is not None and len(row) != cols):
            raise DocumentError(f"{path}[{i}]", f"expected a row of length {cols}")
        if cols is None:
            cols = len(row)
        data.append([_scalar(e, order, f"{path}[{i}][{j}]") for j, e in enumerate(row)])
    return ExactMatrix(data, order=order, shape=(rows, cols))


def _vector(x, rank: int, order: int, path: str) -> ExactMatrix:
    if not isinstance(x, list) or len(x) != rank:
        raise DocumentError(path, f"expected {rank} entries")
    return ExactMatrix([[_scalar(e, order, f"{path}[{i}]")] for i, e in enumerate(x)], order=order, shape=(rank, 1))


def _vhs(x, rank: int, path: str) -> VHSBlock:
    weight = _int(_req(x, "weight", path), f"{path}.weight")
    S = _matrix(_req(x, "polarization", path), rank, rank, 1, f"{path}.polarization")
    raw_flag = _req(x, "flag", path)
    if not isinstance(raw_flag, dict) or not raw_flag:
        raise DocumentError(f"{path}.flag", "expected an object p -> index list")
    flag = []
    for key, idx in raw_flag.items():
        try:
            p = int(key)
        except ValueError:
            raise DocumentError(f"{path}.flag", f"key {key!r} is not an integer") from None
        if not isinstance(idx, list):
            raise DocumentError(f"{path}.flag.{key}", "expected a list of basis indices")
        cols = tuple(_int(i, f"{path}.flag.{key}[{t}]", minimum=1) for t, i in enumerate(idx))
        for t, c in enumerate(cols):
            if c > rank:
                raise DocumentError(f"{path}.flag.{key}[{t}]", f"index exceeds rank {rank}")
        flag.append((p, cols))
    nil = None
    if "nilpotents" in x:
        raw = x["nilpotents"]
        if not isinstance(raw, list):
            raise DocumentError(f"{path}.nilpotents", "expected a list of matrices")
        nil = tuple(_matrix(m, rank, rank, 1, f"{path}.nilpotents[{i}]") for i, m in enumerate(raw))
    return VHSBlock(weight, S, tuple(sorted(flag)), nil)


def _section(x, rank: int, n: int, path: str) -> SectionBlock:
    basis = x.get("basis", "standard") if isinstance(x, dict) else None
    if basis not in ("standard", "adapted"):
        raise DocumentError(f"{path}.basis", "expected 'standard' or 'adapted'")
    raw = _req(x, "terms", path)
    if not isinstance(raw, list):
        raise DocumentError(f"{path}.terms", "expected a list")
    terms = []
    for t, term in enumerate(raw):
        p = f"{path}.terms[{t}]"
        alpha = _int(_req(term, "alpha", p), f"{p}.alpha", minimum=1)
        if alpha > rank:
            raise DocumentError(f"{p}.alpha", f"exceeds rank {rank}")
        exps = _req(term, "exponents", p)
        if not isinstance(exps, list) or len(exps) != n:
            raise DocumentError(f"{p}.exponents", f"expected {n} integers")
        exps = tuple(_int(e, f"{p}.exponents[{i}]") for i, e in enumerate(exps))
        coeff = term.get("coeff", 1)
        if isinstance(coeff, dict):
            re = _rational(coeff.get("re", 0), f"{p}.coeff.re")
            im = _rational(coeff.get("im", 0), f"{p}.coeff.im")
        else:
            re, im = _rational(coeff, f"{p}.coeff"), Fraction(0)
        terms.append(SectionTerm(alpha, exps, re, im))
    tail = x.get("symbolic_tail", False)
    if not isinstance(tail, bool):
        raise DocumentError(f"{path}.symbolic_tail", "expected a boolean")
    return SectionBlock(basis, tuple(terms), tail)


def _region(x, path: str) -> RegionBlock:
    a = _rational(_req(x, "a", path), f"{path}.a")
    eps = _rational(_req(x, "epsilon", path), f"{path}.epsilon")
    if not 0 < a < 1:
        raise DocumentError(f"{path}.a", "must lie in (0, 1)")
    if eps <= 0:
        raise DocumentError(f"{path}.epsilon", "must be positive")
    samples = _int(x.get("samples", 1000), f"{path}.samples", minimum=1)
    return RegionBlock(a, eps, samples)


def _points(x, n: int, path: str):
    if not isinstance(x, list) or not x:
        raise DocumentError(path, "expected a non-empty list of points")
    out = []
    for k, pt in enumerate(x):
        if not isinstance(pt, list) or len(pt) != n:
            raise DocumentError(f"{path}[{k}]", f"expected {n} coordinates")
        coords = []
        for j, c in enumerate(pt):
            if not isinstance(c, list) or len(c) != 2:
                raise DocumentError(f"{path}[{k}][{j}]", "expected [re, im]")
            coords.append((_rational(c[0], f"{path}[{k}][{j}][0]"), _rational(c[1], f"{path}[{k}][{j}][1]")))
        out.append(tuple(coords))
    return tuple(out)


_KNOWN = {"schema_version", "rank", "n", "cyclotomic_order", "matrices", "vhs", "section", "region", "Q", "points", "vectors"}


def parse_document(obj: Any) -> InputDocument:
    if not isinstance(obj, dict):
        raise DocumentError("$", "document must be an object")
    unknown = set(obj) - _KNOWN
    if unknown:
        raise DocumentError("$", f"unknown keys {sorted(unknown)}")
    version = _int(_req(obj, "schema_version", "$"), "$.schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError("$.schema_version", f"unsupported version {version}")
    rank = _int(_req(obj, "rank", "$"), "$.rank", minimum=1)
    n = _int(_req(obj, "n", "$"), "$.n", minimum=1)
    order = _int(obj.get("cyclotomic_order", 1), "$.cyclotomic_order", minimum=1)
    mats = _req(obj, "matrices", "$")
    if not isinstance(mats, list) or len(mats) != n:
        raise DocumentError("$.matrices", f"expected {n} matrices")
    matrices = tuple(_matrix(m, rank, rank, order, f"$.matrices[{j}]") for j, m in enumerate(mats))
    vhs = _vhs(obj["vhs"], rank, "$.vhs") if "vhs" in obj else None
    section = _section(obj["section"], rank, n, "$.section") if "section" in obj else None
    region = _region(obj["region"], "$.region") if "region" in obj else None
    Q = _matrix(obj["Q"], rank, rank, order, "$.Q") if "Q" in obj else None
    points = _points(obj["points"], n, "$.points") if "points" in obj else None
    vectors = None
    if "vectors" in obj:
        if not isinstance(obj["vectors"], list):
            raise DocumentError("$.vectors", "expected a list of vectors")
        vectors = tuple(_vector(v, rank, order, f"$.vectors[{i}]") for i, v in enumerate(obj["vectors"]))
    return InputDocument(rank, n, order, matrices, vhs, section, region, Q, points, vectors, version)


def load_document(path: str) -> InputDocument:
    """Read and parse; JSON syntax errors are reported with line and column."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_document(obj)


# serialization ---------------------------------------------------------


def encode_scalar(x: CycScalar):
    """Canonical encoding: an int when possible, else {num, den} with reduced coefficients."""
    fr = [Fraction(int(c.numerator), int(c.denominator)) for c in x.coeffs]
    if all(c.denominator == 1 for c in fr) and not any(fr[1:]):
        return int(fr[0])
    den = math.lcm(*(c.denominator for c in fr))
    num = [int(c * den) for c in fr]
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return {"num": num, "den": den}


def _enc_matrix(m: ExactMatrix) -> list:
    return [[encode_scalar(e) for e in row] for row in m.tolist()]


def _enc_rational(x: Fraction):
    return int(x) if x.denominator == 1 else [x.numerator, x.denominator]


def document_to_json(doc: InputDocument) -> dict:
    out: dict[str, Any] = {
        "schema_version": doc.schema_version,
        "rank": doc.rank,
        "n": doc.n,
        "cyclotomic_order": doc.cyclotomic_order,
        "matrices": [_enc_matrix(m) for m in doc.matrices],
    }
    if doc.vhs is not None:
        v = doc.vhs
        block = {
            "weight": v.weight,
            "polarization": _enc_matrix(v.polarization),
            "flag": {str(p): list(idx) for p, idx in v.flag},
        }
        if v.nilpotents is not None:
            block["nilpotents"] = [_enc_matrix(m) for m in v.nilpotents]
        out["vhs"] = block
    if doc.section is not None:
        s = doc.section
        out["section"] = {
            "basis": s.basis,
            "symbolic_tail": s.symbolic_tail,
            "terms": [
                {
                    "alpha": t.alpha,
                    "exponents": list(t.exponents),
                    "coeff": {"re": _enc_rational(t.re), "im": _enc_rational(t.im)},
                }
                for t in s.terms
            ],
        }
    if doc.region is not None:
        r = doc.region
        out["region"] = {"a": _enc_rational(r.a), "epsilon": _enc_rational(r.epsilon), "samples": r.samples}
    if doc.Q is not None:
        out["Q"] = _enc_matrix(doc.Q)
    if doc.points is not None:
        out["points"] = [[[_enc_rational(re), _enc_rational(im)] for re, im in pt] for pt in doc.points]
    if doc.vectors is not None:
        out["vectors"] = [[encode_scalar(e) for e in v.column(0)] for v in doc.vectors]
    return out


def _write(obj, parts: list[str], indent: int, level: int) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        parts.append(format(obj, ".17g") if math.isfinite(obj) else "null")
    elif isinstance(obj, Fraction):
        parts.append(json.dumps(str(obj)))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{\n")
        for t, key in enumerate(sorted(obj, key=str)):
            parts.append(f"{pad}{json.dumps(str(key))}: ")
            _write(obj[key], parts, indent, level + 1)
            parts.append(",\n" if t < len(obj) - 1 else "\n")
        parts.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            parts.append("[]")
            return
        if all(isinstance(x, (int, float, str, Fraction)) or x is None for x in obj):
            inner: list[str] = []
            for t, x in enumerate(obj):
                _write(x, inner, indent, level)
                if t < len(obj) - 1:
                    inner.append(", ")
            parts.append("[" + "".join(inner) + "]")
            return
        parts.append("[\n")
        for t, x in enumerate(obj):
            parts.append(pad)
            _write(x, parts, indent, level + 1)
            parts.append(",\n" if t < len(obj) - 1 else "\n")
        parts.append(end + "]")
    elif hasattr(obj, "item"):  # numpy scalars
        _write(obj.item(), parts, indent, level)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON: sorted keys, floats to 17 significant digits, NaN as null."""
    parts: list[str] = []
    _write(obj, parts, indent, 0)
    return "".join(parts) + "\n"
