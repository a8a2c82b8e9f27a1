"""Check requests and reports: the layer behind the command line."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .coxeter import SUPPORTED_TYPES, build_coxeter, build_ncw
from .errors import InvalidInput, UnsupportedFamily
from .families import boolean_lattice, noncrossing_partition_lattice, partition_lattice, subspace_poset
from .poset import GradedPoset, find_bowtie, is_modular, load_poset
from .spindles import (
    Status,
    cat0_verdict_rank_le4,
    enumerate_global_spindles,
    find_short_spindle,
    girth_cutoff,
    spindle_from_bowtie,
    witness_from_dict,
)

SCHEMA = "orthocurve/1"
FAMILIES = ("boolean", "partition", "ncp", "subspace", "ncw")
CHECKS = ("validate", "lattice", "modular", "spindles", "cat0")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int | None = None
    q: int | None = None
    type: str | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"family": self.family}
        for key in ("n", "q", "type"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out


def build_family(spec: FamilySpec) -> GradedPoset:
    f = spec.family
    if f not in FAMILIES:
        raise UnsupportedFamily(f"unknown family {f!r}; choose from {', '.join(FAMILIES)}")
    if f == "ncw":
        if spec.type is None:
            raise InvalidInput("family ncw needs --type")
        if spec.type not in SUPPORTED_TYPES:
            raise UnsupportedFamily(f"unsupported Coxeter type {spec.type!r}")
        return build_ncw(build_coxeter(spec.type))
    if spec.n is None:
        raise InvalidInput(f"family {f} needs --n")
    if f == "boolean":
        return boolean_lattice(spec.n)
    if f == "partition":
        return partition_lattice(spec.n)
    if f == "ncp":
        return noncrossing_partition_lattice(spec.n)
    return subspace_poset(spec.n, 2 if spec.q is None else spec.q)


@dataclass(frozen=True)
class CheckRequest:
    source: FamilySpec | str
    checks: tuple[str, ...] = CHECKS
    max_girth: int | None = None
    output: str = "text"

    def __post_init__(self) -> None:
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise InvalidInput(f"unknown checks: {', '.join(bad)}")
        if self.output not in ("text", "json"):
            raise InvalidInput(f"output must be text or json, got {self.output!r}")


@dataclass
class Report:
    poset: dict[str, Any]
    checks: dict[str, Any]
    timing: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "tool": {"name": "orthocurve", "version": __version__},
            "poset": self.poset,
            "checks": self.checks,
            "timing": self.timing,
        }

    def to_text(self) -> str:
        p = self.poset
        lines = [f"{p['name']}: {p['size']} elements, rank {p['rank']}"]
        c = self.checks
        if "validate" in c:
            lines.append(f"  validate: ok ({c['validate']['covers']} covers)")
        if "lattice" in c:
            bt = c["lattice"]["bowtie"]
            extra = f" (bowtie {' '.join(bt['labels'])})" if bt else ""
            lines.append(f"  lattice: {'yes' if c['lattice']['is_lattice'] else 'no'}{extra}")
        if "modular" in c:
            m = c["modular"]["is_modular"]
            lines.append(f"  modular: {'n/a' if m is None else 'yes' if m else 'no'}")
        if "spindles" in c:
            s = c["spindles"]
            girths = ",".join(map(str, s["girths"])) or "-"
            lines.append(
                f"  spindles (global, girth <= {s['max_girth']}): {s['count']} found, "
                f"girths {girths}, {s['short_count']} short"
            )
            short = s["short_spindle"]
            lines.append("  short spindle: " + ("none" if short is None else _describe(short)))
        if "cat0" in c:
            v = c["cat0"]
            lines.append(f"  cat0: {v['status']}" + (f" ({v['notes']})" if v["notes"] else ""))
            if v["witness"] is not None:
                lines.append("    witness: " + _describe(v["witness"]))
        return "\n".join(lines)


def _describe(w: dict[str, Any]) -> str:
    if w["kind"] == "bowtie":
        return "bowtie " + ", ".join(w["labels"])
    cyc = " -> ".join(w["labels"])
    return f"girth {w['girth']}, length {w['length_over_pi']:.4f}π: {cyc}"


def _poset_summary(P: GradedPoset, source: FamilySpec | str) -> dict[str, Any]:
    src = source.to_dict() if isinstance(source, FamilySpec) else {"file": str(source)}
    return {"name": P.name, "size": len(P), "rank": P.rank, "source": src}


def load_source(source: FamilySpec | str) -> GradedPoset:
    if isinstance(source, FamilySpec):
        return build_family(source)
    if not Path(source).exists():
        raise FileNotFoundError(source)
    return load_poset(source)


def execute_check(req: CheckRequest) -> Report:
    """Build or load the poset and run the requested checks in dependency order."""
    t0 = time.perf_counter()
    P = load_source(req.source)
    timing = {"load": time.perf_counter() - t0}
    checks: dict[str, Any] = {}

    def timed(name: str, fn: Any) -> None:
        t = time.perf_counter()
        checks[name] = fn()
        timing[name] = time.perf_counter() - t

    for name in CHECKS:
        if name not in req.checks:
            continue
        if name == "validate":
            timed(name, lambda: {"ok": True, "size": len(P), "rank": P.rank, "covers": len(P.covers)})
        elif name == "lattice":
            def lattice() -> dict[str, Any]:
                bt = find_bowtie(P)
                return {
                    "is_lattice": bt is None,
                    "bowtie": None if bt is None else bt.to_dict(P),
                    "girth4_spindle": None if bt is None else spindle_from_bowtie(P, bt).to_dict(P),
                }
            timed(name, lattice)
        elif name == "modular":
            def modular() -> dict[str, Any]:
                if find_bowtie(P) is not None:
                    return {"is_modular": None, "violation": None, "notes": "not a lattice"}
                ok, bad = is_modular(P)
                return {"is_modular": ok, "violation": None if bad is None else list(bad), "notes": ""}
            timed(name, modular)
        elif name == "spindles":
            def spindles() -> dict[str, Any]:
                g = req.max_girth if req.max_girth is not None else max(6, girth_cutoff(P.rank))
                found = enumerate_global_spindles(P, g) if P.rank >= 3 else []
                short = find_short_spindle(P)
                return {
                    "max_girth": g,
                    "count": len(found),
                    "girths": sorted({s.girth for s in found}),
                    "short_count": sum(s.short for s in found),
                    "boundary_count": sum(s.boundary for s in found),
                    "min_length": min((s.length for s in found), default=None),
                    "spindles": [s.to_dict(P) for s in found],
                    "short_spindle": None if short is None else short.to_dict(P),
                }
            timed(name, spindles)
        elif name == "cat0":
            timed(name, lambda: cat0_verdict_rank_le4(P).to_dict(P))
    return Report(_poset_summary(P, req.source), checks, timing)


def source_from_summary(summary: dict[str, Any]) -> FamilySpec | str:
    src = summary["source"]
    if "file" in src:
        return src["file"]
    return FamilySpec(src["family"], src.get("n"), src.get("q"), src.get("type"))


def verify_report(obj: dict[str, Any]) -> list[str]:
    """Re-generate the poset of a report and re-validate every embedded witness.

    Returns a list of problems; empty means everything re-validated.
    """
    if obj.get("schema") != SCHEMA:
        return [f"unexpected schema {obj.get('schema')!r}"]
    P = load_source(source_from_summary(obj["poset"]))
    problems = []
    witnesses = []
    checks = obj.get("checks", {})
    if checks.get("lattice", {}).get("bowtie"):
        witnesses.append(("lattice.bowtie", checks["lattice"]["bowtie"]))
    if checks.get("spindles", {}).get("short_spindle"):
        witnesses.append(("spindles.short_spindle", checks["spindles"]["short_spindle"]))
    cat0 = checks.get("cat0")
    if cat0 and cat0["status"] == Status.NOT_CAT0.value:
        if cat0.get("witness") is None:
            problems.append("cat0: NotCAT0 without witness")
        else:
            witnesses.append(("cat0.witness", cat0["witness"]))
    for where, w in witnesses:
        try:
            rebuilt = witness_from_dict(P, w)
        except (ValueError, KeyError) as exc:
            problems.append(f"{where}: {exc}")
            continue
        if w["kind"] == "spindle" and not math.isclose(rebuilt.length, w["length"], abs_tol=1e-12):
            problems.append(f"{where}: length mismatch")
    return problems
