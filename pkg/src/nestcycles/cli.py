"""Command-line front end.

Exit status: 0 success, 1 verification failure, 2 input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import networkx as nx

from . import corpus
from .canonical import (CanonicalAbort, GeneratingSet, build_canonical, face_boundary_reduction,
                        verify_canonical)
from .decomposition import (DecompositionError, blocks, degree_sequence, generates_torsos, lift_generators,
                            project_generators, torso, tutte_decompose)
from .derivation import Derivation
from .groups import (BoundaryError, Presentation, automorphisms, based_at_identity, cayley_ball, genpi,
                     orbit_partition_pi, unit_squares, verify_genpi)
from .homology import spans_cycle_lattice
from .membership import MODES
from .planar_map import EmbeddingError, GraphError, NonPlanarWitness, embed
from .textio import FormatError, graph_hash, map_from_text, map_to_text, parse_graph_text
from .walks import ClosedWalk, WalkError, parse_walk

SCHEMA = "nestcycles-report/1"

OK, FAILED, BAD_INPUT, EXHAUSTED = 0, 1, 2, 3


class InputError(Exception):
    pass


class Exhausted(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None
    mode: str = "homology-Z"
    fmt: str = "text"
    spin: str = "auto"
    radius: int = 3
    node_budget: int = 200_000
    coset_cap: int = 20_000
    orbit_budget: int = 50_000
    i_max: int | None = None
    cycle: str | None = None
    graph: str | None = None
    base: str | None = None

    def validate(self):
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {', '.join(MODES)}")
        for name in ("node_budget", "coset_cap", "orbit_budget", "radius"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name.replace('_', '-')} must be positive")


class Output:
    """Collects records and renders them as text or as JSON lines."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.records = []
        self.text = []

    def record(self, record_type: str, **data):
        self.records.append({"record": record_type, **data})

    def line(self, s: str = ""):
        self.text.append(s)

    def render(self, status: int, reason: str | None = None) -> str:
        if self.cfg.fmt == "json":
            head = {"schema": SCHEMA, "command": self.cfg.command}
            rows = [head] + self.records + [{"record": "status", "exit": status, "reason": reason}]
            return "".join(json.dumps(r, sort_keys=True, default=str) + "\n" for r in rows)
        out = list(self.text)
        if reason:
            out.append(f"error: {reason}" if status == BAD_INPUT else reason)
        return "\n".join(out) + ("\n" if out else "")


def _read(path: str | None) -> str:
    if path is None:
        raise InputError("an input file is required")
    if path.startswith("corpus:"):
        name = path.split(":", 1)[1]
        if name not in corpus.NAMED:
            raise InputError(f"unknown corpus graph {name!r}")
        return map_to_text(corpus.named_map(name))
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(str(e)) from e


def _map(cfg: RunConfig):
    try:
        return map_from_text(_read(cfg.input), cfg.spin)
    except (FormatError, EmbeddingError, GraphError) as e:
        raise InputError(str(e)) from e


def _walk(text: str | None, m):
    if not text:
        raise InputError("--cycle is required")
    try:
        w = parse_walk(text)
        w.validate(m.graph)
    except (WalkError, ValueError) as e:
        raise InputError(str(e)) from e
    return w


def cmd_embed(cfg, out):
    g, _, _ = parse_graph_text(_read(cfg.input))
    res = embed(g)
    if isinstance(res, NonPlanarWitness):
        out.record("nonplanar", edges=[list(e) for e in res.edges])
        out.line("nonplanar; Kuratowski subgraph edges:")
        out.line(" ".join(f"{u}-{v}" for u, v in res.edges))
        return FAILED
    out.record("map", spin={str(v): list(s) for v, s in res.spin.items()}, outer=list(res.faces[res.outer]))
    out.line(map_to_text(res).rstrip())
    return OK


def cmd_faces(cfg, out):
    m = _map(cfg)
    for i, f in enumerate(m.faces):
        out.record("face", index=i, outer=i == m.outer, walk="-".join(map(str, f)))
        out.line(f"{i}{' outer' if i == m.outer else ''}: {'-'.join(map(str, f))}")
    return OK


def cmd_regions(cfg, out):
    m = _map(cfg)
    w = _walk(cfg.cycle, m)
    if not w.is_cycle():
        raise InputError("regions needs a cycle")
    rp = m.cycle_regions(w.vertices)
    for side, vs, fs in ((0, rp.side0_vertices, rp.side0_faces), (1, rp.side1_vertices, rp.side1_faces)):
        vs = sorted(map(str, vs))
        fs = sorted(fs)
        out.record("side", side=side, vertices=vs, faces=fs, outer=m.outer in fs)
        out.line(f"side {side}{' (outer)' if m.outer in fs else ''}: vertices {' '.join(vs)}; faces {fs}")
    return OK


def cmd_canonical(cfg, out):
    m = _map(cfg)
    try:
        gs = build_canonical(m, cfg.mode, cfg.i_max, cfg.node_budget, cfg.coset_cap)
    except CanonicalAbort as e:
        out.record("abort", query=e.query)
        out.line(e.query.rstrip())
        raise Exhausted(str(e)) from e
    except ValueError as e:
        raise InputError(str(e)) from e
    rep = verify_canonical(gs, automorphisms(m.graph), m)
    for c in gs.elements:
        p = gs.provenance[c]
        out.record("element", stage=p.stage, step=p.step, mu=p.mu, mu_batch=p.mu_batch, walk=str(c.rep))
    out.record("verification", invariant=rep.invariant, nested=rep.nested, generates=rep.generates,
               stage_lengths=rep.stage_lengths, shortcut_free=rep.shortcut_free)
    out.line(gs.to_text().rstrip())
    out.line("# clauses failing: " + (", ".join(rep.failed_clauses()) or "none"))
    return OK if rep.ok else FAILED


def cmd_reduce(cfg, out):
    m = _map(cfg)
    w = _walk(cfg.cycle, m)
    try:
        d = face_boundary_reduction(m, w)
    except ValueError as e:
        raise InputError(str(e)) from e
    ok = d.is_valid(m.graph)
    out.record("derivation", text=d.to_text(), replays=ok)
    out.line(d.to_text().rstrip())
    return OK if ok else FAILED


def _graph(cfg):
    try:
        g, _, _ = parse_graph_text(_read(cfg.input))
    except (FormatError, GraphError) as e:
        raise InputError(str(e)) from e
    return g


def cmd_tutte(cfg, out):
    g = _graph(cfg)
    try:
        tt = tutte_decompose(g)
    except DecompositionError as e:
        raise InputError(str(e)) from e
    errs = tt.check()
    for i, p in enumerate(tt.parts):
        out.record("part", index=i, kind=tt.kinds[i], vertices=list(p))
    for (a, b), s in sorted(tt.adhesion.items()):
        out.record("adhesion", parts=[a, b], vertices=sorted(map(str, s)))
    out.record("check", errors=errs)
    out.line(tt.to_text().rstrip())
    if errs:
        out.line("# invariant violations: " + "; ".join(errs))
    return FAILED if errs else OK


def cmd_blocks(cfg, out):
    g = _graph(cfg)
    bt = blocks(g)
    for i, b in enumerate(bt.blocks):
        out.record("block", index=i, vertices=list(b.vertices), edges=[list(e) for e in b.edges])
        out.line(f"block {i}: {' '.join(map(str, b.vertices))}")
    out.record("cutvertices", vertices=list(bt.cutvertices))
    out.line("cutvertices: " + " ".join(map(str, bt.cutvertices)))
    errs = bt.check()
    return FAILED if errs else OK


def cmd_lift(cfg, out):
    g = _graph(cfg)
    try:
        tt = tutte_decompose(g)
    except DecompositionError as e:
        raise InputError(str(e)) from e
    per = {}
    for t in range(len(tt.parts)):
        h = torso(tt, t)
        per[t] = [ClosedWalk(tuple(c) + (c[0],)) for c in _cycle_basis(h)]
    lifted = lift_generators(tt, per)
    ok = spans_cycle_lattice(g, lifted)
    back = all(generates_torsos(tt, project_generators(tt, lifted)).values())
    for w in lifted:
        out.record("walk", walk=str(w))
        out.line(str(w))
    out.record("verification", lift_generates=ok, project_generates=back)
    out.line(f"# lift generates H1: {ok}; projection generates every torso: {back}")
    return OK if ok and back else FAILED


def _cycle_basis(h):
    """Fundamental cycles of a BFS tree, as vertex lists in walk order."""
    nxg = h.to_networkx()
    out = []
    for c in nx.cycle_basis(nxg, h.vertices[0]) if h.vertices else []:
        out.append(c)
    return out


def cmd_degseq(cfg, out):
    g = _graph(cfg)
    a = automorphisms(g)
    seq = degree_sequence(g, a)
    out.record("degree_sequence", sequence=list(seq), order=a.order, orbits=[list(o) for o in a.orbits])
    out.line(f"automorphisms: {a.order}")
    out.line("orbits: " + " | ".join(" ".join(map(str, o)) for o in a.orbits))
    out.line("degree sequence: (" + ", ".join(map(str, seq)) + ")")
    return OK


def _presentation(cfg):
    try:
        return Presentation.parse(_read(cfg.input))
    except ValueError as e:
        raise InputError(str(e)) from e


def _ball(cfg, p):
    try:
        return cayley_ball(p, cfg.radius)
    except RuntimeError as e:
        raise Exhausted(str(e)) from e


def cmd_cayley_ball(cfg, out):
    b = _ball(cfg, _presentation(cfg))
    out.record("ball", radius=b.radius, vertices=len(b.graph.vertices), edges=len(b.graph.edges),
               interior=len(b.interior))
    for (u, v), c in sorted(b.labels.items()):
        out.record("edge", source=u, target=v, label=c)
    out.line(b.to_text().rstrip())
    return OK


def cmd_genpi(cfg, out):
    m = _map(cfg)
    gs = build_canonical(m, "homology-Z")
    V = [c.rep for c in gs.elements]
    base = m.graph.vertices[0] if cfg.base is None else _vertex(cfg.base, m.graph)
    elems = genpi(m, V, base)
    rep = verify_genpi(m.graph, elems, base, cfg.coset_cap)
    for e in elems:
        out.record("element", word=list(e.word), walk=str(e.walk))
        out.line(f"{' '.join(map(str, e.word)) or '1'}\t{e.walk}")
    out.record("verification", rank=rep.rank, abelian_rank=rep.abelian_rank,
               normal_closure_everything=rep.normal_closure_trivial_quotient)
    out.line(f"# rank {rep.rank}; abelianisation rank {rep.abelian_rank}; "
             f"normal closure is everything: {rep.normal_closure_trivial_quotient}")
    return OK if rep.generates else FAILED


def _vertex(text, g):
    v = int(text) if text.lstrip("-").isdigit() else text
    if v not in g.adj:
        raise InputError(f"{text!r} is not a vertex")
    return v


def cmd_orbits(cfg, out):
    p = _presentation(cfg)
    b = _ball(cfg, p)
    seeds = []
    for r in p.rels:
        seeds += [based_at_identity(b, w) for w in unit_squares(b, r)]
    try:
        rep = orbit_partition_pi(b, seeds, cfg.orbit_budget)
    except BoundaryError as e:
        raise Exhausted(str(e)) from e
    out.record("orbits", count=rep.count, seeds=len(seeds), explored=rep.explored, exhausted=rep.exhausted)
    out.line(f"seeds: {len(seeds)}; orbits: {rep.count}; states explored: {rep.explored}")
    if rep.exhausted:
        raise Exhausted("orbit budget exhausted before the partition stabilised")
    return OK


def cmd_verify(cfg, out):
    text = _read(cfg.input)
    first = text.lstrip().split("\n", 1)[0].strip()
    g = None
    m = None
    if cfg.graph:
        m = map_from_text(_read(cfg.graph), cfg.spin)
        g = m.graph
    if first.startswith("derivation"):
        try:
            d = Derivation.from_text(text)
        except (ValueError, IndexError) as e:
            raise InputError(f"cannot parse derivation: {e}") from e
        ok, bad = d.replay(g)
        out.record("replay", ok=ok, first_failing_step=bad)
        out.line("derivation replays" if ok else f"derivation fails at step {bad}")
        return OK if ok else FAILED
    if first.startswith("generating-set"):
        if m is None:
            raise InputError("verifying a generating set needs --graph")
        try:
            gs = GeneratingSet.from_text(text)
        except ValueError as e:
            raise InputError(str(e)) from e
        if gs.graph_digest and gs.graph_digest != graph_hash(g):
            out.record("verification", graph_matches=False)
            out.line("graph hash does not match the generating set")
            return FAILED
        rep = verify_canonical(gs, automorphisms(g), m)
        out.record("verification", graph_matches=True, invariant=rep.invariant, nested=rep.nested,
                   generates=rep.generates, stage_lengths=rep.stage_lengths, shortcut_free=rep.shortcut_free)
        out.line("clauses failing: " + (", ".join(rep.failed_clauses()) or "none"))
        return OK if rep.ok else FAILED
    raise InputError("unrecognised artifact; expected a derivation or a generating set")


COMMANDS = {
    "embed": cmd_embed,
    "faces": cmd_faces,
    "regions": cmd_regions,
    "canonical": cmd_canonical,
    "reduce-to-faces": cmd_reduce,
    "tutte": cmd_tutte,
    "blocks": cmd_blocks,
    "lift": cmd_lift,
    "degseq": cmd_degseq,
    "cayley-ball": cmd_cayley_ball,
    "genpi": cmd_genpi,
    "orbits": cmd_orbits,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nestcycles", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("input", nargs="?", help="graph, presentation or artifact file; corpus:NAME for a built-in graph")
    ap.add_argument("--mode", default="homology-Z", choices=MODES)
    ap.add_argument("--format", dest="fmt", default="text", choices=("text", "json"))
    ap.add_argument("--spin", default="auto", choices=("auto", "given", "compute"),
                    help="use the listed neighbour order as the rotation system")
    ap.add_argument("--radius", type=int, default=3)
    ap.add_argument("--budget", dest="node_budget", type=int, default=200_000, help="search-node budget")
    ap.add_argument("--coset-cap", type=int, default=20_000)
    ap.add_argument("--orbit-budget", type=int, default=50_000)
    ap.add_argument("--i-max", type=int)
    ap.add_argument("--cycle", help="walk such as 1-2-3-1")
    ap.add_argument("--graph", help="graph file for verify")
    ap.add_argument("--base", help="base vertex for genpi")
    return ap


def run(cfg: RunConfig) -> tuple:
    out = Output(cfg)
    try:
        cfg.validate()
        status = COMMANDS[cfg.command](cfg, out)
        reason = None if status == OK else "verification failed"
    except InputError as e:
        status, reason = BAD_INPUT, str(e)
    except (FormatError, EmbeddingError, GraphError, WalkError) as e:
        status, reason = BAD_INPUT, str(e)
    except Exhausted as e:
        status, reason = EXHAUSTED, f"budget exhausted: {e}"
    return status, out.render(status, reason)


def main(argv=None) -> int:
    ns = build_parser().parse_intermixed_args(argv)
    cfg = RunConfig(**vars(ns))
    status, text = run(cfg)
    stream = sys.stderr if status == BAD_INPUT and cfg.fmt == "text" else sys.stdout
    stream.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
