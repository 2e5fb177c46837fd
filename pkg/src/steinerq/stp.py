"""SteinLib STP reading and writing, random instances, and result records."""

from __future__ import annotations

import csv
import io
import json
import logging
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .graph import Graph, GraphError, SteinerError, is_connected, vertex_set

log = logging.getLogger(__name__)

HEADER = "33D32945 STP File, STP Format Version 1.0"


class STPParseError(SteinerError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Instance:
    graph: Graph
    terminals: tuple[int, ...]
    name: str = ""
    optimum: float | None = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def k(self) -> int:
        return len(self.terminals)


def _number(tok: str, lineno: int):
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        x = float(tok)
    except ValueError:
        raise STPParseError(f"not a number: {tok!r}", lineno) from None
    return int(x) if x.is_integer() and "e" not in tok.lower() and "." not in tok else x


def _vertex(tok: str, n: int | None, lineno: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise STPParseError(f"vertex id {tok!r} is not an integer", lineno) from None
    if v < 1 or (n is not None and v > n):
        raise STPParseError(f"vertex {v} outside 1..{n}", lineno)
    return v - 1


def parse_stp(text: str, name: str = "") -> Instance:
    """Parse an STP document; vertex ids are 1-based in the file, 0-based in the result."""
    lines = text.splitlines()
    if not lines or not lines[0].strip().upper().startswith("33D32945"):
        raise STPParseError("missing STP magic header", 1)
    section = None
    n = None
    declared_edges = declared_terms = None
    edges: list[tuple[int, int, float]] = []
    terms: list[int] = []
    seen = set()
    ended = False
    optimum = None
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0].upper()
        if ended:
            raise STPParseError("content after EOF", lineno)
        if section is None:
            if head == "EOF":
                ended = True
            elif head == "SECTION" and len(toks) >= 2:
                section = toks[1].upper()
                if section in seen:
                    raise STPParseError(f"duplicate section {toks[1]}", lineno)
                seen.add(section)
                if section not in ("GRAPH", "TERMINALS", "COMMENT"):
                    log.warning("line %d: skipping unknown section %s", lineno, toks[1])
            else:
                raise STPParseError(f"expected SECTION or EOF, got {toks[0]!r}", lineno)
            continue
        if head == "END":
            section = None
            continue
        if section == "COMMENT":
            if head == "NAME" and not name:
                name = line[len(toks[0]):].strip().strip('"')
            elif head == "OPTIMUM":
                if len(toks) != 2:
                    raise STPParseError("bad Optimum line", lineno)
                optimum = _number(toks[1], lineno)
        elif section == "GRAPH":
            if head == "NODES":
                n = int(_number(toks[1], lineno)) if len(toks) == 2 else None
                if n is None or n < 0:
                    raise STPParseError("bad Nodes line", lineno)
            elif head == "EDGES":
                declared_edges = int(_number(toks[1], lineno)) if len(toks) == 2 else None
                if declared_edges is None:
                    raise STPParseError("bad Edges line", lineno)
            elif head in ("E", "A"):
                if n is None:
                    raise STPParseError("edge before Nodes", lineno)
                if len(toks) != 4:
                    raise STPParseError("edge lines need two endpoints and a weight", lineno)
                u, v = _vertex(toks[1], n, lineno), _vertex(toks[2], n, lineno)
                w = _number(toks[3], lineno)
                if u == v:
                    raise STPParseError(f"self-loop at vertex {u + 1}", lineno)
                if not w > 0:
                    raise STPParseError(f"non-positive weight {toks[3]}", lineno)
                edges.append((u, v, w))
            else:
                raise STPParseError(f"unexpected keyword {toks[0]!r} in Graph section", lineno)
        elif section == "TERMINALS":
            if head == "TERMINALS":
                declared_terms = int(_number(toks[1], lineno)) if len(toks) == 2 else None
                if declared_terms is None:
                    raise STPParseError("bad Terminals line", lineno)
            elif head == "T":
                if len(toks) != 2:
                    raise STPParseError("terminal lines need one vertex", lineno)
                terms.append(_vertex(toks[1], n, lineno))
            else:
                raise STPParseError(f"unexpected keyword {toks[0]!r} in Terminals section", lineno)
    if section is not None:
        raise STPParseError(f"section {section} not closed")
    if not ended:
        raise STPParseError("missing EOF marker")
    if n is None:
        raise STPParseError("no Graph section with a Nodes count")
    if declared_edges is not None and declared_edges != len(edges):
        raise STPParseError(f"Edges declares {declared_edges} but {len(edges)} edge lines follow")
    if declared_terms is not None and declared_terms != len(terms):
        raise STPParseError(f"Terminals declares {declared_terms} but {len(terms)} terminal lines follow")
    try:
        G = Graph(n, edges)
    except GraphError as e:
        raise STPParseError(str(e)) from None
    bad = [t + 1 for t in terms if t >= n]
    if bad:
        raise STPParseError(f"terminal {bad[0]} outside 1..{n}")
    return Instance(G, vertex_set(terms), name, optimum)


def read_stp(path: str | Path) -> Instance:
    path = Path(path)
    return parse_stp(path.read_text(), path.stem)


def _fmt_weight(w) -> str:
    if isinstance(w, int):
        return str(w)
    w = float(w)
    return str(int(w)) if w.is_integer() else repr(w)


def write_stp(inst: Instance) -> str:
    """Canonical STP text: sorted edges, sorted terminals, one trailing newline."""
    out = [HEADER, ""]
    if inst.name or inst.optimum is not None:
        out.append("SECTION Comment")
        if inst.name:
            out.append(f'Name "{inst.name}"')
        if inst.optimum is not None:
            out.append(f"Optimum {_fmt_weight(inst.optimum)}")
        out += ["END", ""]
    out += ["SECTION Graph", f"Nodes {inst.graph.n}", f"Edges {len(inst.graph.edges)}"]
    out += [f"E {u + 1} {v + 1} {_fmt_weight(w)}" for u, v, w in inst.graph.edges]
    out += ["END", "", "SECTION Terminals", f"Terminals {len(inst.terminals)}"]
    out += [f"T {t + 1}" for t in sorted(inst.terminals)]
    out += ["END", "", "EOF"]
    return "\n".join(out) + "\n"


def save_stp(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(write_stp(inst))


def generate(seed: int, n: int, k: int, density: float = 0.4, weight_range: tuple[int, int] = (1, 10),
             retries: int = 1000, name: str | None = None) -> Instance:
    """Connected random graph with integer weights and k distinct terminals.

    Edges appear independently with probability ``density``; disconnected
    draws are rejected and redrawn.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    lo, hi = weight_range
    if not 1 <= lo <= hi:
        raise ValueError("weight range must satisfy 1 <= lo <= hi")
    rng = random.Random(seed)
    for _ in range(retries):
        edges = [
            (u, v, rng.randint(lo, hi))
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < density
        ]
        G = Graph(n, edges)
        if is_connected(G):
            K = vertex_set(rng.sample(range(n), k))
            return Instance(G, K, name if name is not None else f"rand_s{seed}_n{n}_k{k}")
    raise SteinerError(f"no connected graph after {retries} draws (n={n}, density={density})")


def corpus(seed: int = 0, count: int = 200, max_n: int = 12, k_range: tuple[int, int] = (2, 6),
           wmax: int = 10) -> list[Instance]:
    """Seeded corpus of small connected instances; each draws n, k and density from ``seed``."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        k = rng.randint(*k_range)
        n = rng.randint(max(k, 3), max_n)
        density = rng.choice((0.3, 0.45, 0.6))
        out.append(generate(rng.randrange(2**31), n, k, density, (1, wmax), name=f"c{seed}_{i:03d}"))
    return out


RESULT_FIELDS = (
    "instance", "algorithm", "weight", "time_ms",
    "level1_N", "level1_q", "level2_N", "level2_q", "level3_N", "level3_q",
    "classical_evals", "quantum_queries", "beta", "epsilon", "a_cap", "levels", "widenings",
)


@dataclass
class ResultRecord:
    instance: str
    algorithm: str
    weight: float
    time_ms: float
    level_N: dict = field(default_factory=dict)
    level_q: dict = field(default_factory=dict)
    classical_evals: int | None = None
    quantum_queries: int | None = None
    beta: float | None = None
    epsilon: float | None = None
    a_cap: int | None = None
    levels: int | None = None
    widenings: int | None = None
    ledger: dict | None = None
    tree: list | None = None

    @classmethod
    def from_run(cls, instance: str, algorithm: str, tree, time_ms: float, ledger=None, params=None) -> "ResultRecord":
        rec = cls(instance, algorithm, tree.weight, time_ms, tree=[list(e) for e in tree.edge_pairs()])
        if ledger is not None:
            for lv, r in ledger.records.items():
                rec.level_N[lv] = sum(N * c for N, c in r.sizes.items())
                rec.level_q[lv] = r.quantum
            rec.classical_evals = ledger.classical_evaluations
            rec.quantum_queries = ledger.quantum_queries
            rec.widenings = len(ledger.meta.get("widenings", []))
            rec.a_cap = ledger.meta.get("a_cap")
            rec.ledger = ledger.to_dict()
        if params is not None:
            rec.beta, rec.epsilon, rec.levels = params.beta, params.epsilon, params.levels
            if rec.a_cap is None:
                rec.a_cap = params.a_cap
        return rec

    def row(self) -> dict:
        row = {
            "instance": self.instance,
            "algorithm": self.algorithm,
            "weight": _fmt_weight(self.weight),
            "time_ms": f"{self.time_ms:.3f}",
        }
        for lv in (1, 2, 3):
            row[f"level{lv}_N"] = self.level_N.get(lv, "")
            row[f"level{lv}_q"] = self.level_q.get(lv, "")
        for key in ("classical_evals", "quantum_queries", "beta", "epsilon", "a_cap", "levels", "widenings"):
            val = getattr(self, key)
            row[key] = "" if val is None else val
        return row

    def to_dict(self) -> dict:
        d = asdict(self)
        d["level_N"] = {str(k): v for k, v in self.level_N.items()}
        d["level_q"] = {str(k): v for k, v in self.level_q.items()}
        return d


def results_csv(records) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=RESULT_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def emit_results(records, out_dir: str | Path) -> tuple[Path, Path]:
    """Write results.csv and results.json into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = list(records)
    csv_path, json_path = out_dir / "results.csv", out_dir / "results.json"
    csv_path.write_text(results_csv(records))
    json_path.write_text(json.dumps([r.to_dict() for r in records], indent=2, default=str) + "\n")
    return csv_path, json_path
