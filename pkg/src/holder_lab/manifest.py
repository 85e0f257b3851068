"""Instance manifests: JSON files naming fractal cubes and self-similar sets.

    {
      "bases": {"lam": {"num": 1, "den": 2}, "mu": null},
      "instances": [
        {"kind": "fractal_cube", "id": "cantor", "n": 3, "d": 1, "digits": [[0], [2]]},
        {"kind": "self_similar", "id": "E",
         "ratios": [{"kind": "power", "base": "lam", "num": 2, "den": 1},
                    {"kind": "rational", "num": 1, "den": 8}]}
      ]
    }

A base with a declared value is substituted eagerly; a base declared as
``null`` (or ``{}``) stays an opaque symbol in (0, 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .arith import Monomial
from .classify import SelfSimilar
from .cube import FractalCube, validate
from .symbolic import base_power, scale_factor


class ManifestError(ValueError):
    """Malformed manifest or unknown instance id."""


def _fraction(obj: Any, where: str) -> Fraction:
    try:
        num, den = obj["num"], obj["den"]
    except (TypeError, KeyError):
        raise ManifestError(f"{where}: expected an object with 'num' and 'den'") from None
    if not isinstance(num, int) or not isinstance(den, int) or den == 0:
        raise ManifestError(f"{where}: num/den must be integers with den != 0")
    return Fraction(num, den)


@dataclass
class Manifest:
    bases: dict[str, Fraction | None] = field(default_factory=dict)
    instances: dict[str, FractalCube | SelfSimilar] = field(default_factory=dict)

    def get(self, instance_id: str) -> FractalCube | SelfSimilar:
        try:
            return self.instances[instance_id]
        except KeyError:
            raise ManifestError(f"unknown instance id {instance_id!r}") from None

    def to_json(self) -> dict:
        bases = {
            k: None if v is None else {"num": v.numerator, "den": v.denominator}
            for k, v in sorted(self.bases.items())
        }
        out = []
        for iid, inst in self.instances.items():
            if isinstance(inst, FractalCube):
                out.append({"kind": "fractal_cube", "id": iid, **inst.to_json()})
            else:
                out.append({"kind": "self_similar", "id": iid, "ratios": [_ratio_json(r) for r in inst.ratios]})
        return {"bases": bases, "instances": out}


def _ratio_json(r: Monomial) -> dict:
    if r.is_rational:
        q = r.to_fraction()
        return {"kind": "rational", "num": q.numerator, "den": q.denominator}
    if len(r.factors) == 1 and isinstance(r.factors[0][0], str):
        base, e = r.factors[0]
        return {"kind": "power", "base": base, "num": e.numerator, "den": e.denominator}
    return {"kind": "exact", "value": str(r)}


def _ratio(obj: Any, bases: dict[str, Fraction | None], where: str) -> Monomial:
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "rational":
        value = _fraction(obj, where)
        try:
            return scale_factor(value)
        except ValueError as exc:
            raise ManifestError(f"{where}: {exc}") from None
    if kind == "power":
        base = obj.get("base")
        if base not in bases:
            raise ManifestError(f"{where}: base {base!r} is not declared")
        exponent = _fraction(obj, where)
        try:
            sym = base_power(base, exponent)
            if bases[base] is not None:
                sym = sym.substitute({base: scale_factor(bases[base])})
            return scale_factor(sym)
        except ValueError as exc:
            raise ManifestError(f"{where}: {exc}") from None
    raise ManifestError(f"{where}: ratio kind must be 'rational' or 'power'")


def parse_manifest(doc: Any) -> Manifest:
    if not isinstance(doc, dict) or not isinstance(doc.get("instances"), list):
        raise ManifestError("manifest must be an object with an 'instances' list")
    bases: dict[str, Fraction | None] = {}
    for name, value in (doc.get("bases") or {}).items():
        bases[name] = None if not value else _fraction(value, f"base {name}")
        if bases[name] is not None and not 0 < bases[name] < 1:
            raise ManifestError(f"base {name} must lie strictly between 0 and 1")
    out = Manifest(bases=bases)
    for k, item in enumerate(doc["instances"]):
        where = f"instance #{k}"
        if not isinstance(item, dict) or not isinstance(item.get("id"), str):
            raise ManifestError(f"{where}: needs a string 'id'")
        iid = item["id"]
        if iid in out.instances:
            raise ManifestError(f"duplicate instance id {iid!r}")
        kind = item.get("kind")
        try:
            if kind == "fractal_cube":
                out.instances[iid] = validate(item.get("n"), item.get("d"), item.get("digits") or [])
            elif kind == "self_similar":
                ratios = item.get("ratios")
                if not isinstance(ratios, list):
                    raise ManifestError(f"{iid}: 'ratios' must be a list")
                out.instances[iid] = SelfSimilar(tuple(_ratio(r, bases, f"{iid} ratio #{j}") for j, r in enumerate(ratios)))
            else:
                raise ManifestError(f"{where}: unknown kind {kind!r}")
        except ManifestError:
            raise
        except (ValueError, TypeError) as exc:
            raise ManifestError(f"{iid}: {exc}") from None
    return out


def load_manifest(path: str | Path) -> Manifest:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ManifestError(f"cannot read manifest: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from None
    return parse_manifest(doc)
