"""Plain-text model files.

A file has the sections ``[H_S]``, ``[H_B]``, ``[V]``, ``[H_0]`` and
``[params]``.  Matrix sections hold one row per line as whitespace-separated
``re,im`` pairs; ``[params]`` holds ``key = value`` lines for ``beta``,
``tau`` and optionally ``hbar`` (default 1).  ``#`` starts a comment.

    [H_S]
    0.5,0   0,0
    0,0    -0.5,0
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .collision import CollisionSpec, validate_equilibrium
from .config import TOL
from .errors import DegenerateSpectrumError, DimensionError, EquilibriumError, ModelFileError, StructureError
from .models import Model

MATRIX_SECTIONS = ("H_S", "H_B", "V", "H_0")
PARAM_KEYS = {"beta", "tau", "hbar"}


def _parse(text: str, path=None):
    sections: dict[str, list[tuple[int, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in MATRIX_SECTIONS and current != "params":
                raise ModelFileError(f"unknown section [{current}]", lineno, path)
            if current in sections:
                raise ModelFileError(f"duplicate section [{current}]", lineno, path)
            sections[current] = []
            continue
        if current is None:
            raise ModelFileError("content before the first section header", lineno, path)
        sections[current].append((lineno, line))
    missing = [s for s in MATRIX_SECTIONS + ("params",) if s not in sections]
    if missing:
        raise ModelFileError(f"missing section(s): {', '.join('[' + s + ']' for s in missing)}", None, path)
    return sections


def _matrix(name: str, lines, path) -> np.ndarray:
    rows = []
    for lineno, line in lines:
        row = []
        for col, tok in enumerate(line.split()):
            parts = tok.split(",")
            if len(parts) != 2:
                raise ModelFileError(f"[{name}] column {col}: expected 're,im', got {tok!r}", lineno, path)
            try:
                row.append(complex(float(parts[0]), float(parts[1])))
            except ValueError:
                raise ModelFileError(f"[{name}] column {col}: not a number pair: {tok!r}", lineno, path) from None
        rows.append((lineno, row))
    if not rows:
        raise ModelFileError(f"[{name}] is empty", None, path)
    n = len(rows)
    for lineno, row in rows:
        if len(row) != n:
            raise ModelFileError(f"[{name}] row has {len(row)} entries, expected {n} (square matrix)", lineno, path)
    m = np.array([r for _, r in rows])
    diff = np.abs(m - m.conj().T)
    if diff.max() > TOL.hermitian:
        i, j = np.unravel_index(np.argmax(diff), diff.shape)
        raise ModelFileError(
            f"[{name}] is not Hermitian: entry ({i},{j}) = {m[i, j]} but entry ({j},{i}) = {m[j, i]}",
            rows[i][0],
            path,
        )
    return m


def _params(lines, path) -> dict[str, float]:
    out = {}
    for lineno, line in lines:
        if "=" not in line:
            raise ModelFileError(f"[params] expected 'key = value', got {line!r}", lineno, path)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in PARAM_KEYS:
            raise ModelFileError(f"[params] unknown key {key!r}", lineno, path)
        try:
            out[key] = float(value)
        except ValueError:
            raise ModelFileError(f"[params] {key}: not a number: {value!r}", lineno, path) from None
    for key in ("beta", "tau"):
        if key not in out:
            raise ModelFileError(f"[params] missing {key}", None, path)
    return out


def parse_model(text: str, path=None) -> Model:
    sections = _parse(text, path)
    mats = {name: _matrix(name, sections[name], path) for name in MATRIX_SECTIONS}
    params = _params(sections["params"], path)
    try:
        spec = CollisionSpec(
            mats["H_S"], mats["H_B"], mats["V"], tau=params["tau"], beta=params["beta"], hbar=params.get("hbar", 1.0)
        )
        validate_equilibrium(spec, mats["H_0"])
    except (DimensionError, EquilibriumError, DegenerateSpectrumError, StructureError) as exc:
        raise ModelFileError(str(exc), None, path) from exc
    return Model(spec, mats["H_0"])


def load_custom_model(path) -> Model:
    path = Path(path)
    return parse_model(path.read_text(), str(path))


def _format_matrix(m) -> str:
    m = np.asarray(m, dtype=complex)
    return "\n".join(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row) for row in m)


def dump_model(model: Model, path=None) -> str:
    spec = model.spec
    parts = []
    for name, m in (("H_S", spec.H_S.matrix), ("H_B", spec.H_B.matrix), ("V", spec.V.matrix), ("H_0", model.H_0)):
        parts.append(f"[{name}]\n{_format_matrix(m)}")
    parts.append(f"[params]\nbeta = {float(spec.beta)!r}\ntau = {float(spec.tau)!r}\nhbar = {float(spec.hbar)!r}")
    text = "\n\n".join(parts) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def bundled_model_path(name: str = "1q.model") -> Path:
    return Path(__file__).with_name("data") / name
