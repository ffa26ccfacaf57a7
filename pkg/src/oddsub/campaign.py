"""Seeded verification campaigns over generated graph families."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exact import (
    BRUTE_CAP, CHROMATIC_CAP, chromatic_brute, gallai_partition, mois_brute, mois_dp,
)
from .generators import FamilySpec, generate, make_rng
from .graph import Graph, is_even_set
from .reduction import construct_odd, verify_certificate

CHECKS = ("ratio", "oracle", "gallai", "tree-bound", "chi-bound", "subcubic-bound")
ORACLE_MAX_N = 12
SIZED_BY_K = ("c5_union", "hk")


@dataclass(frozen=True)
class CampaignConfig:
    family: str
    trials: int = 100
    seed: int = 0
    n_min: int = 5
    n_max: int = 200
    p2: float = 0.6
    checks: tuple[str, ...] = ("ratio",)
    jobs: int = 1
    sizes: Optional[tuple[int, ...]] = None   # explicit n (or k) per trial

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise ValueError(f"unknown checks {bad}; expected some of {', '.join(CHECKS)}")
        if self.n_min > self.n_max:
            raise ValueError("n_min > n_max")

    def instance_sizes(self) -> list[int]:
        if self.sizes is not None:
            return [int(s) for s in self.sizes]
        rng = make_rng(self.seed)
        return [int(s) for s in rng.integers(self.n_min, self.n_max + 1, size=self.trials)]

    def spec(self, index: int, size: int) -> FamilySpec:
        if self.family in SIZED_BY_K:
            return FamilySpec(self.family, k=size, seed=self.seed, p2=self.p2, index=index)
        return FamilySpec(self.family, n=size, seed=self.seed, p2=self.p2, index=index)


@dataclass
class CampaignReport:
    passes: dict[str, int] = field(default_factory=dict)
    failures: dict[str, int] = field(default_factory=dict)
    violations: list[dict] = field(default_factory=list)
    min_f_ratio: Optional[Fraction] = None
    min_construct_ratio: Optional[Fraction] = None
    fallback_count: int = 0
    instances: int = 0
    wall_time: float = 0.0
    max_instance_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "CampaignReport") -> None:
        for k, v in other.passes.items():
            self.passes[k] = self.passes.get(k, 0) + v
        for k, v in other.failures.items():
            self.failures[k] = self.failures.get(k, 0) + v
        self.violations.extend(other.violations)
        self.violations.sort(key=lambda d: (d["index"], d["check"]))
        self.min_f_ratio = _min(self.min_f_ratio, other.min_f_ratio)
        self.min_construct_ratio = _min(self.min_construct_ratio, other.min_construct_ratio)
        self.fallback_count += other.fallback_count
        self.instances += other.instances
        self.max_instance_time = max(self.max_instance_time, other.max_instance_time)

    def to_json(self) -> dict:
        return {
            "instances": self.instances,
            "passes": dict(sorted(self.passes.items())),
            "failures": dict(sorted(self.failures.items())),
            "violations": self.violations,
            "min_f_ratio": _frac_json(self.min_f_ratio),
            "min_construct_ratio": _frac_json(self.min_construct_ratio),
            "fallback_count": self.fallback_count,
            "wall_time": round(self.wall_time, 3),
            "max_instance_time": round(self.max_instance_time, 3),
        }

    def summary(self) -> str:
        lines = [f"{self.instances} instances, {len(self.violations)} violations, "
                 f"{self.fallback_count} fallbacks, {self.wall_time:.2f}s"]
        for k in sorted(set(self.passes) | set(self.failures)):
            lines.append(f"  {k}: {self.passes.get(k, 0)} pass, {self.failures.get(k, 0)} fail")
        if self.min_f_ratio is not None:
            lines.append(f"  min f/n = {self.min_f_ratio} ({float(self.min_f_ratio):.4f})")
        if self.min_construct_ratio is not None:
            lines.append(f"  min construct ratio = {self.min_construct_ratio} "
                         f"({float(self.min_construct_ratio):.4f})")
        for v in self.violations[:10]:
            lines.append(f"  violation #{v['index']} n={v['n']} {v['check']}: {v['detail']}")
        return "\n".join(lines)


def _min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _frac_json(x: Optional[Fraction]):
    if x is None:
        return None
    return {"exact": f"{x.numerator}/{x.denominator}", "decimal": float(x)}


def check_instance(G: Graph, checks, index: int = 0, family: str = "") -> CampaignReport:
    rep = CampaignReport(instances=1)
    n = G.n

    def record(check, ok, detail=""):
        if ok:
            rep.passes[check] = rep.passes.get(check, 0) + 1
        else:
            rep.failures[check] = rep.failures.get(check, 0) + 1
            rep.violations.append({"index": index, "family": family, "n": n,
                                   "check": check, "detail": detail})

    f_cache: dict[str, int] = {}

    def f_value(method):
        if method not in f_cache:
            res = mois_brute(G) if method == "brute" else mois_dp(G)
            record("parity", res.size % 2 == 0, f"{method} witness of odd size {res.size}")
            f_cache[method] = res.size
            if n:
                rep.min_f_ratio = _min(rep.min_f_ratio, Fraction(res.size, n))
        return f_cache[method]

    t0 = time.perf_counter()
    if "ratio" in checks:
        try:
            cert = construct_odd(G)
        except ValueError as e:
            record("ratio", False, f"input outside scope: {e}")
            cert = None
    if "ratio" in checks and cert is not None:
        ok, msg = verify_certificate(G, cert)
        record("ratio", ok, msg)
        record("parity", cert.size % 2 == 0, f"certificate of odd size {cert.size}")
        if cert.fallback_used:
            rep.fallback_count += 1
            record("no-fallback", False, "fallback at " + ", ".join(cert.fallback_branches))
        else:
            record("no-fallback", True)
        rep.min_construct_ratio = cert.ratio
    if "oracle" in checks and n <= ORACLE_MAX_N:
        a, b = f_value("dp"), f_value("brute")
        record("oracle", a == b, f"mois_dp {a} != mois_brute {b}")
    if "gallai" in checks:
        part = gallai_partition(G)
        even = is_even_set(G, part.side_a) and is_even_set(G, part.side_b)
        big = max(len(part.side_a), len(part.side_b))
        record("gallai", even and 2 * big >= n, f"sides {len(part.side_a)}/{len(part.side_b)}, even={even}")
    if "tree-bound" in checks:
        f = f_value("dp")
        bound = 2 * ((n + 1) // 3)
        record("tree-bound", f >= bound, f"f={f} < {bound}")
        if f == bound:
            rep.passes["tree-bound-tight"] = rep.passes.get("tree-bound-tight", 0) + 1
    if "chi-bound" in checks and n <= CHROMATIC_CAP:
        f = f_value("brute")
        chi = chromatic_brute(G)
        record("chi-bound", 2 * chi * f >= n, f"f={f}, chi={chi}")
    if "subcubic-bound" in checks and n <= BRUTE_CAP:
        f = f_value("brute")
        record("subcubic-bound", 5 * f >= 2 * n and G.max_degree() <= 3, f"f={f}, maxdeg={G.max_degree()}")
    rep.max_instance_time = time.perf_counter() - t0
    return rep


def _run_one(args) -> CampaignReport:
    config, index, size = args
    G = generate(config.spec(index, size))
    return check_instance(G, config.checks, index, config.family)


def run_campaign(config: CampaignConfig) -> CampaignReport:
    t0 = time.perf_counter()
    sizes = config.instance_sizes()
    tasks = [(config, i, s) for i, s in enumerate(sizes[: config.trials])]
    report = CampaignReport()
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as ex:
            for part in ex.map(_run_one, tasks, chunksize=max(1, len(tasks) // (4 * config.jobs))):
                report.merge(part)
    else:
        for t in tasks:
            report.merge(_run_one(t))
    report.wall_time = time.perf_counter() - t0
    return report
