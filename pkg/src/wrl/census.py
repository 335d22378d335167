"""Sampling census of real ranks on secant varieties, stratified by type.

Every sample is drawn from its own seed, derived from the master seed and the
key ``(e, a, index)``, so a single record can be replayed alone with
:func:`replay_record`.  Per-sample failures are recorded, never raised.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .binaryforms import real_rank_binary, verify_decomposition, witness_rank_d
from .exactmath import GaussianRational
from .rankcert import TYPICAL_RANK_THEOREMS, certified_rank_multi, tangential_certificate, verify_reconstruction
from .veronese import (
    classify_sigma2,
    real_span_basis,
    sample_configuration,
    sample_in_span,
    tangential_form,
)

log = logging.getLogger(__name__)

TYPICAL_THRESHOLD = 0.05
CONSTRUCTIONS = ("uniform", "perturbation")
THEOREMS = ("u1", "u2", "w2", "w3", "w4", "w5", "w6", "w7", "w8")


class CensusError(ValueError):
    """Invalid census or theorem parameters."""


def strata(b: int) -> list[tuple[int, int]]:
    """All types ``(e, a)`` with ``e + 2a = b``, all-real first."""
    return [(b - 2 * a, a) for a in range(b // 2 + 1)]


@dataclass(frozen=True)
class CensusSpec:
    m: int
    d: int
    b: int
    types: tuple = ()
    samples_per_type: int = 10
    seed: int = 0
    point_height: int = 10
    span_height: int = 100
    construction: str = "uniform"
    workers: int = 1

    def __post_init__(self):
        types = tuple(tuple(t) for t in self.types) or tuple(strata(self.b))
        object.__setattr__(self, "types", types)
        if self.m < 1 or self.d < 1:
            raise CensusError("need m >= 1 and d >= 1")
        if self.samples_per_type < 1:
            raise CensusError("samples_per_type must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise CensusError("seed must be a 64-bit unsigned integer")
        if self.point_height < 1 or self.span_height < 1:
            raise CensusError("height bounds must be >= 1")
        if self.construction not in CONSTRUCTIONS:
            raise CensusError(f"construction must be one of {CONSTRUCTIONS}")
        for e, a in types:
            if e < 0 or a < 0 or e + 2 * a != self.b:
                raise CensusError(f"type {(e, a)} does not satisfy e + 2a = b = {self.b}")
        if self.m == 1:
            if not 2 <= self.b <= (self.d + 2) / 2:
                raise CensusError(f"binary census needs 2 <= b <= (d+2)/2, got b={self.b}, d={self.d}")
        elif self.b < 1 or self.d < 2 * self.b - 1:
            raise CensusError(f"need 1 <= b and d >= 2b-1 for a unique decomposition, got b={self.b}, d={self.d}")
        if self.construction == "perturbation" and self.m != 1:
            raise CensusError("the perturbation construction is binary only")

    @property
    def tag(self) -> str:
        return f"census_m{self.m}_d{self.d}_b{self.b}_s{self.seed}"

    def to_json(self) -> dict:
        return {
            "m": self.m, "d": self.d, "b": self.b,
            "types": [list(t) for t in self.types],
            "samples_per_type": self.samples_per_type,
            "seed": self.seed,
            "point_height": self.point_height,
            "span_height": self.span_height,
            "construction": self.construction,
        }


@dataclass
class CensusRecord:
    type: tuple
    index: int
    sample_seed: int
    resamples: int = 0
    rank: int | None = None
    status: str = "failed"
    certificate: dict = field(default_factory=dict)
    wall_time: float = 0.0
    error: str | None = None

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "type": list(self.type),
            "index": self.index,
            "sample_seed": self.sample_seed,
            "resamples": self.resamples,
            "rank": self.rank,
            "status": self.status,
            "certificate": self.certificate,
            "error": self.error,
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out


def sample_seed(master: int, e: int, a: int, index: int) -> int:
    """Counter-based per-sample seed: independent of run order and of other types."""
    ss = np.random.SeedSequence(master, spawn_key=(e, a, index))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def _subseeds(seed: int, n: int) -> list[int]:
    return [int(x) for x in np.random.SeedSequence(seed).generate_state(n, dtype=np.uint64)]


def _gauss(rng, h: int) -> GaussianRational:
    return GaussianRational(int(rng.integers(-h, h + 1)), int(rng.integers(-h, h + 1)))


def _perturbation_slots(e: int, a: int, seed: int, height: int) -> tuple[GaussianRational, list]:
    """Leading coefficient and perturbation slots for a witness of type ``(e, a)``.

    The first pair sits at ``(1 : i)``; the remaining points are random
    (distinct, Gaussian-integer pairs off the real axis, integer reals).
    """
    rng = np.random.default_rng(seed)
    c = GaussianRational(0)
    while not c:
        c = _gauss(rng, height)
    used = {GaussianRational(0, 1), GaussianRational(0, -1)}
    slots = []
    while len(slots) < a - 1:
        p = _gauss(rng, height)
        if p.im == 0 or p in used:
            continue
        used |= {p, p.conj()}
        k = GaussianRational(0)
        while not k:
            k = _gauss(rng, height)
        slots.append((k, p))
    while len(slots) < a - 1 + e:
        p = GaussianRational(int(rng.integers(-height, height + 1)))
        if p in used:
            continue
        used.add(p)
        k = 0
        while not k:
            k = int(rng.integers(-height, height + 1))
        slots.append((GaussianRational(k), p))
    return c, slots


def _binary_summary(f, cert) -> dict:
    """Certificate without the bulky decomposition, after checking that decomposition."""
    if not verify_decomposition(f, cert.witness_decomposition):
        raise RuntimeError("binary decomposition does not reconstruct the form")
    out = cert.to_json()
    out.pop("witness_decomposition", None)
    out["checks"] = {"reconstruction": True}
    return out


def _evaluate(spec: CensusSpec, e: int, a: int, index: int) -> CensusRecord:
    seed = sample_seed(spec.seed, e, a, index)
    rec = CensusRecord((e, a), index, seed)
    t0 = time.perf_counter()
    try:
        s_conf, s_span, s_search = _subseeds(seed, 3)
        if spec.m == 1 and spec.construction == "perturbation" and a >= 1:
            c, slots = _perturbation_slots(e, a, s_conf, spec.point_height)
            w = witness_rank_d(spec.d, c, slots)
            cert = real_rank_binary(w.form, seed=s_search)
            rec.resamples = w.halvings
            rec.certificate = {"construction": "perturbation", "witness": w.to_json(),
                               "rank": _binary_summary(w.form, cert)}
            rec.rank, rec.status = cert.rank, cert.status
        else:
            A = sample_configuration(spec.m, e, a, s_conf, height_bound=spec.point_height)
            basis = real_span_basis(A, spec.d)
            smp = sample_in_span(A, spec.d, s_span, height_bound=spec.span_height, basis=basis)
            rec.resamples = smp.resamples
            if spec.m == 1:
                cert = real_rank_binary(smp.form.as_binary(), seed=s_search)
                rec.certificate = {"construction": "uniform", "config": A.to_json(),
                                   "weights": smp.weights, "rank": _binary_summary(smp.form.as_binary(), cert)}
                rec.rank, rec.status = cert.rank, cert.status
            else:
                cert = certified_rank_multi(smp.form, A, basis=basis)
                if not verify_reconstruction(smp.form, cert.decomposition):
                    raise RuntimeError("reconstruction check failed")
                rec.certificate = {"construction": "uniform", "config": A.to_json(),
                                   "weights": smp.weights, "rank": cert.to_json(full=False)}
                rec.rank, rec.status = cert.certified_value, cert.status
            if spec.b == 2:
                rec.certificate["sigma2_class"] = classify_sigma2(smp.form)
    except Exception as exc:  # recorded, not fatal
        log.warning("sample %s/%d failed: %s", (e, a), index, exc)
        rec.status, rec.rank, rec.error = "failed", None, f"{type(exc).__name__}: {exc}"
    rec.wall_time = time.perf_counter() - t0
    return rec


def replay_record(spec: CensusSpec, e: int, a: int, index: int) -> CensusRecord:
    """Recompute a single record from a CensusSpec and its coordinates."""
    return _evaluate(spec, e, a, index)


def _evaluate_task(args):
    return _evaluate(*args)


def _worker_count(requested: int) -> int:
    cap = os.environ.get("WRL_THREADS")
    n = max(1, requested)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise CensusError(f"WRL_THREADS must be an integer, got {cap!r}") from None
    return n


def summarize(records: Sequence[CensusRecord], threshold: float = TYPICAL_THRESHOLD) -> dict:
    """Per-type rank frequencies over resolved samples, plus unresolved and failed counts."""
    by_type: dict = {}
    for r in records:
        by_type.setdefault(tuple(r.type), []).append(r)
    table = {}
    for t in sorted(by_type):
        recs = by_type[t]
        ranks = Counter(r.rank for r in recs if r.rank is not None)
        resolved = sum(ranks.values())
        unresolved = sum(1 for r in recs if r.rank is None and r.status != "failed")
        failed = sum(1 for r in recs if r.status == "failed")
        freqs = {k: ranks[k] / resolved for k in sorted(ranks)} if resolved else {}
        table[t] = {
            "samples": len(recs),
            "resolved": resolved,
            "unresolved": unresolved,
            "failed": failed,
            "counts": dict(sorted(ranks.items())),
            "frequencies": freqs,
            "typical": sorted(k for k, f in freqs.items() if f >= threshold),
        }
    return {"types": table, "threshold": threshold,
            "typical": sorted({k for row in table.values() for k in row["typical"]})}


def run_census(spec: CensusSpec) -> tuple[list[CensusRecord], dict]:
    tasks = [(spec, e, a, i) for e, a in spec.types for i in range(spec.samples_per_type)]
    workers = _worker_count(spec.workers)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_evaluate_task, tasks))
    else:
        records = [_evaluate(*t) for t in tasks]
    records.sort(key=lambda r: (r.type, r.index))
    return records, summarize(records)


def run_tangential(m: int, d: int, samples: int, seed: int, height: int = 10) -> list[CensusRecord]:
    """Real points of the tangential variety ``(p.x)^(d-1) (v.x)`` and their ranks."""
    out = []
    for i in range(samples):
        s = sample_seed(seed, 0, 0, 2 ** 31 + i)
        rec = CensusRecord(("tangential",), i, s)
        t0 = time.perf_counter()
        try:
            rng = np.random.default_rng(s)
            while True:
                p = [int(x) for x in rng.integers(-height, height + 1, size=m + 1)]
                v = [int(x) for x in rng.integers(-height, height + 1, size=m + 1)]
                if np.linalg.matrix_rank(np.array([p, v], dtype=float)) == 2:
                    break
            f = tangential_form(p, v, d)
            if m == 1:
                cert = real_rank_binary(f.as_binary(), seed=s)
                info = {"class": classify_sigma2(f), "rank": _binary_summary(f.as_binary(), cert)}
                rec.rank, rec.status = cert.rank, cert.status
            else:
                info = tangential_certificate(f)
                info.pop("binary", None)
                rec.rank, rec.status = info["rank"], info["status"]
            rec.certificate = {"p": p, "v": v, **info}
        except Exception as exc:
            rec.status, rec.error = "failed", f"{type(exc).__name__}: {exc}"
        rec.wall_time = time.perf_counter() - t0
        out.append(rec)
    return out


# ---------------------------------------------------------------------------
# theorem checks


@dataclass
class TheoremReport:
    theorem: str
    params: dict
    passed: bool
    expected: list
    observed: list
    details: dict = field(default_factory=dict)
    records: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "params": self.params, "passed": self.passed,
                "expected": self.expected, "observed": self.observed, "details": self.details}


def _check_hypotheses(theorem: str, m: int, d: int, b: int | None) -> int:
    """Validate ``(m, d, b)`` against the theorem's hypotheses; return the effective b."""
    if theorem not in THEOREMS:
        raise CensusError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")
    if theorem in TYPICAL_RANK_THEOREMS:
        tb, min_m, min_d, _ = TYPICAL_RANK_THEOREMS[theorem]
        if b not in (None, tb):
            raise CensusError(f"{theorem} is about b = {tb}")
        if m < min_m or d < min_d:
            raise CensusError(f"{theorem} needs m >= {min_m} and d >= {min_d}")
        return tb
    if theorem == "w2":
        if b not in (None, 2):
            raise CensusError("w2 is about b = 2")
        if m < 1 or d < 3:
            raise CensusError("w2 needs m >= 1 and d >= 3")
        return 2
    if b is None:
        raise CensusError(f"{theorem} needs b")
    if theorem == "w8":
        if m < 2 or b < 2 or d < 2 * b - 1:
            raise CensusError("w8 needs m >= 2, b >= 2 and d >= 2b - 1")
        return b
    if m != 1:
        raise CensusError(f"{theorem} is a binary (m = 1) statement")
    if theorem == "u1" and not 2 <= b <= (d + 2) / 2:
        raise CensusError("u1 needs 2 <= b <= (d+2)/2")
    if theorem == "u2" and (b < 2 or d < 2 * b - 1):
        raise CensusError("u2 needs b >= 2 and d >= 2b - 1")
    return b


def _certified_set(records, types) -> set:
    return {r.rank for r in records if tuple(r.type) in types and r.rank is not None}


def verify_theorem(theorem: str, m: int, d: int, b: int | None = None, samples: int = 10,
                   seed: int = 0, workers: int = 1, point_height: int = 10,
                   span_height: int = 100) -> TheoremReport:
    """Reproduce the predicted real ranks for one theorem at the given parameters."""
    b = _check_hypotheses(theorem, m, d, b)
    params = {"m": m, "d": d, "b": b, "samples": samples, "seed": seed}
    common = dict(samples_per_type=samples, seed=seed, workers=workers,
                  point_height=point_height, span_height=span_height)

    if theorem in TYPICAL_RANK_THEOREMS:
        expected = sorted(TYPICAL_RANK_THEOREMS[theorem][3](d))
        records, summary = run_census(CensusSpec(m, d, b, **common))
        observed = sorted(_certified_set(records, set(strata(b))))
        ok = observed == expected and all(r.status == "certified-exact" for r in records)
        nontrivial = sorted(_certified_set(records, {t for t in strata(b) if t[1] >= 1}))
        details = {"summary": _jsonable(summary), "nontrivial": nontrivial}
        return TheoremReport(theorem, params, ok, expected, observed, details, records)

    if theorem == "w8":
        expected = [b, b + d - 2]
        types = ((b, 0), (b - 2, 1))
        records, summary = run_census(CensusSpec(m, d, b, types=types, **common))
        observed = sorted(_certified_set(records, set(types)))
        ok = observed == expected and all(r.status == "certified-exact" for r in records)
        return TheoremReport(theorem, params, ok, expected, observed,
                             {"summary": _jsonable(summary)}, records)

    if theorem == "w2":
        records, summary = run_census(CensusSpec(m, d, 2, **common))
        tang = run_tangential(m, d, samples, seed, height=point_height)
        want = {(2, 0): 2, (0, 1): d}
        strata_ok = all(r.rank == want[tuple(r.type)] for r in records)
        tang_ok = all(r.rank == d and r.certificate.get("class") == "tangential" for r in tang)
        classes = _sigma2_classes(records)
        class_ok = all(c == ("real-pair" if t == (2, 0) else "conj-pair") for t, c in classes)
        observed = sorted({r.rank for r in records + tang if r.rank is not None})
        details = {"summary": _jsonable(summary), "strata_ok": strata_ok,
                   "tangential_ok": tang_ok, "classification_ok": class_ok,
                   "tangential_ranks": [r.rank for r in tang]}
        ok = strata_ok and tang_ok and class_ok and observed == [2, d]
        return TheoremReport(theorem, params, ok, [2, d], observed, details, records + tang)

    if theorem == "u1":
        paired = [t for t in strata(b) if t[1] >= 1]
        pert, _ = run_census(CensusSpec(1, d, b, types=paired, construction="perturbation", **common))
        uni, summary = run_census(CensusSpec(1, d, b, **common))
        pert_freq, uni_freq = {}, {}
        for t in paired:
            pert_freq[t] = _freq(pert, t, d)
            uni_freq[t] = _freq(uni, t, d)
        real_ok = all(r.rank == b for r in uni if tuple(r.type) == (b, 0))
        ok = real_ok and all(pert_freq[t] >= 0.9 and uni_freq[t] > 0 for t in paired)
        observed = sorted({r.rank for r in pert + uni if r.rank is not None})
        details = {"perturbation_frequency": {str(list(t)): f for t, f in pert_freq.items()},
                   "uniform_frequency": {str(list(t)): f for t, f in uni_freq.items()},
                   "all_real_ok": real_ok, "summary": _jsonable(summary)}
        return TheoremReport(theorem, params, ok, [b, d], observed, details, pert + uni)

    # u2
    paired = [t for t in strata(b) if t[1] >= 1]
    records, summary = run_census(CensusSpec(1, d, b, types=paired, construction="perturbation", **common))
    ok = all(r.rank == d for r in records)
    observed = sorted({r.rank for r in records if r.rank is not None})
    return TheoremReport(theorem, params, ok, [d], observed, {"summary": _jsonable(summary)}, records)


def _freq(records, t, value) -> float:
    recs = [r for r in records if tuple(r.type) == t and r.rank is not None]
    return sum(r.rank == value for r in recs) / len(recs) if recs else 0.0


def _sigma2_classes(records) -> list[tuple]:
    return [(tuple(r.type), r.certificate.get("sigma2_class")) for r in records]


def _jsonable(summary: dict) -> dict:
    return {
        "threshold": summary["threshold"],
        "typical": summary["typical"],
        "types": {",".join(map(str, t)): {**row, "counts": {str(k): v for k, v in row["counts"].items()},
                                          "frequencies": {str(k): v for k, v in row["frequencies"].items()}}
                  for t, row in summary["types"].items()},
    }


# ---------------------------------------------------------------------------
# persistence

CSV_HEADER = ("e", "a", "rank", "count", "frequency", "status")


def summary_rows(summary: dict) -> list[tuple]:
    rows = []
    for t, row in summary["types"].items():
        e, a = (t + ("", ""))[:2] if len(t) == 2 else (t[0], "")
        for k, n in row["counts"].items():
            rows.append((e, a, k, n, f"{row['frequencies'][k]:.6f}", "certified"))
        if row["unresolved"]:
            rows.append((e, a, "", row["unresolved"], "", "unresolved"))
        if row["failed"]:
            rows.append((e, a, "", row["failed"], "", "failed"))
    return rows


def write_results(records: Sequence[CensusRecord], summary: dict, out_dir, tag: str = "census") -> tuple[Path, Path]:
    """Write ``{tag}.jsonl`` (one record per line) and ``{tag}.csv`` (summary) under ``out_dir``.

    Wall times are left out so identical inputs give identical bytes.
    """
    out = Path(out_dir)
    jpath, cpath = out / f"{tag}.jsonl", out / f"{tag}.csv"
    lines = [json.dumps(r.to_json(), sort_keys=True, separators=(",", ":"))
             for r in sorted(records, key=lambda r: (tuple(map(str, r.type)), r.index))]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(summary_rows(summary))
    try:
        out.mkdir(parents=True, exist_ok=True)
        jpath.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        cpath.write_text(buf.getvalue(), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write census results under {out}: {exc}") from exc
    return jpath, cpath
