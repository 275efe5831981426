"""Model document persistence.

One JSON file holds everything a run needs: the formulation, raw
statements, an aggregation configuration, a covering instance, session
snapshots and oracle transcripts. Serialization is canonical (sorted keys,
fixed separators) so that load(save(doc)) is the identity and two runs
producing equal state produce byte-identical files.

Only expression-string evaluators survive serialization; callables are a
programmatic-use convenience and are rejected here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .engine import OracleQuery, Session, attribute_from_spec, variable_from_spec
from .errors import ParseError, UnsupportedVersion
from .formulation import (Alternative, AlternativeSet, Attribute,
                          LinearConstraint, ProblemFormulation,
                          ProblemStatement, Variable)
from .relations import Partition, Relation, relation
from .solvers import CoveringInstance

FORMAT_VERSION = 1


@dataclass
class ModelDocument:
    formulation: ProblemFormulation | None = None
    relation: Relation | None = None
    covering: CoveringInstance | None = None
    statements: list[dict] = field(default_factory=list)
    aggregation: dict | None = None
    sessions: dict[str, Session] = field(default_factory=dict)
    transcripts: dict[str, list] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# encoders

def _enc_variable(v: Variable) -> dict:
    return {"name": v.name, "domain": list(v.domain)
            if v.domain[0] != "enum" else ["enum", list(v.domain[1])]}


def _dec_variable(d: dict) -> Variable:
    return variable_from_spec(d)


def _enc_attribute(a: Attribute) -> dict:
    if a.evaluator is not None and not isinstance(a.evaluator, str):
        raise ParseError(
            f"attribute {a.name}: only expression evaluators serialize")
    if a.decomposition is not None:
        raise ParseError(
            f"attribute {a.name}: decomposed attributes do not serialize")
    return {
        "name": a.name, "scale": a.scale, "codomain": list(a.codomain),
        "origin": a.origin, "separable": a.separable,
        "evaluator": a.evaluator, "higher_is_better": a.higher_is_better,
    }


def _dec_attribute(d: dict) -> Attribute:
    return attribute_from_spec(d)


def _enc_constraint(c) -> dict:
    if isinstance(c, LinearConstraint):
        return {"kind": "linear", "coeffs": [[n, v] for n, v in c.coeffs],
                "op": c.op, "rhs": c.rhs}
    raise ParseError("only linear feasibility constraints serialize")


def _dec_constraint(d: dict) -> LinearConstraint:
    if d.get("kind") != "linear":
        raise ParseError(f"unknown constraint kind at {d!r}")
    return LinearConstraint(
        coeffs=tuple((n, float(v)) for n, v in d["coeffs"]),
        op=d["op"], rhs=float(d["rhs"]))


def _enc_alternative(a: Alternative) -> dict:
    return {"names": list(a.names), "values": list(a.values)}


def _dec_alternative(d: dict) -> Alternative:
    return Alternative(tuple(d["names"]), tuple(d["values"]))


def _enc_formulation(f: ProblemFormulation) -> dict:
    return {
        "variables": [_enc_variable(v) for v in f.alternatives.variables],
        "feasibility": [_enc_constraint(c)
                        for c in f.alternatives.feasibility],
        "explicit_members": (
            None if f.alternatives.explicit_members is None
            else [_enc_alternative(a)
                  for a in f.alternatives.explicit_members]),
        "attributes": [_enc_attribute(a) for a in f.attributes],
        "statement": {
            "kind": f.statement.kind,
            "class_count": f.statement.class_count,
            "class_cardinalities": (
                None if f.statement.class_cardinalities is None
                else list(f.statement.class_cardinalities)),
            "norms": (None if f.statement.norms is None
                      else list(f.statement.norms)),
        },
    }


def _dec_formulation(d: dict) -> ProblemFormulation:
    stmt = d["statement"]
    return ProblemFormulation(
        alternatives=AlternativeSet(
            variables=tuple(_dec_variable(v) for v in d["variables"]),
            feasibility=tuple(_dec_constraint(c)
                              for c in d.get("feasibility", [])),
            explicit_members=(
                None if d.get("explicit_members") is None
                else tuple(_dec_alternative(a)
                           for a in d["explicit_members"]))),
        attributes=tuple(_dec_attribute(a) for a in d["attributes"]),
        statement=ProblemStatement(
            kind=stmt["kind"],
            class_count=stmt.get("class_count"),
            class_cardinalities=(
                None if stmt.get("class_cardinalities") is None
                else tuple(stmt["class_cardinalities"])),
            norms=(None if stmt.get("norms") is None
                   else tuple(stmt["norms"]))),
    )


def _enc_relation(r: Relation) -> dict:
    return {"carrier": list(r.carrier),
            "pairs": sorted([x, y] for x, y in r.pairs),
            "kind": r.kind, "norms": list(r.norms)}


def _dec_relation(d: dict) -> Relation:
    return relation(d["carrier"], [tuple(p) for p in d["pairs"]],
                    kind=d.get("kind", "relative"),
                    norms=d.get("norms", ()))


def _enc_covering(c: CoveringInstance) -> dict:
    return {
        "adjacency": [list(row) for row in c.adjacency],
        "mode": c.mode,
        "costs": None if c.costs is None else list(c.costs),
        "budget": c.budget,
        "populations": (None if c.populations is None
                        else list(c.populations)),
        "target": c.target,
    }


def _dec_covering(d: dict) -> CoveringInstance:
    return CoveringInstance(
        adjacency=tuple(tuple(row) for row in d["adjacency"]),
        mode=d.get("mode", "full_cover"),
        costs=None if d.get("costs") is None else tuple(d["costs"]),
        budget=d.get("budget"),
        populations=(None if d.get("populations") is None
                     else tuple(d["populations"])),
        target=d.get("target"),
    )


def _enc_partition(p: Partition | None) -> dict | None:
    if p is None:
        return None
    return {"classes": [sorted(c) for c in p.classes],
            "ordered": p.ordered,
            "labels": None if p.labels is None else list(p.labels)}


def _dec_partition(d: dict | None) -> Partition | None:
    if d is None:
        return None
    return Partition(tuple(frozenset(c) for c in d["classes"]),
                     ordered=d["ordered"],
                     labels=None if d.get("labels") is None
                     else tuple(d["labels"]))


def encode_session(s: Session) -> dict:
    return {
        "id": s.id,
        "variables": [_enc_variable(v) for v in s.variables],
        "attributes": [_enc_attribute(a) for a in s.attributes],
        "statement": {"kind": s.statement.kind,
                      "class_count": s.statement.class_count},
        "alternatives": [_enc_alternative(a) for a in s.alternatives],
        "max_iter": s.max_iter,
        "status": s.status,
        "iteration": s.iteration,
        "history": s.history,
        "pending": [{"kind": q.kind, "key": q.key, "payload": q.payload}
                    for q in s.pending],
        "lineage": s.lineage,
        "current_partition": _enc_partition(s.current_partition),
        "staged_attribute": s._staged_attribute,
        "staged_variable": s._staged_variable,
        "kept_classes": s._kept_classes,
    }


def decode_session(d: dict) -> Session:
    stmt = d["statement"]
    s = Session(
        id=d["id"],
        variables=[_dec_variable(v) for v in d["variables"]],
        attributes=[_dec_attribute(a) for a in d["attributes"]],
        statement=ProblemStatement(kind=stmt["kind"],
                                   class_count=stmt.get("class_count")),
        alternatives=[_dec_alternative(a) for a in d["alternatives"]],
        max_iter=d["max_iter"],
        status=d["status"],
        iteration=d["iteration"],
        history=list(d["history"]),
        pending=[OracleQuery(q["kind"], q["key"], q.get("payload", {}))
                 for q in d["pending"]],
        lineage=dict(d.get("lineage", {})),
        current_partition=_dec_partition(d.get("current_partition")),
    )
    s._staged_attribute = d.get("staged_attribute")
    s._staged_variable = d.get("staged_variable")
    s._kept_classes = d.get("kept_classes")
    return s


# ---------------------------------------------------------------------------
# documents

def encode_document(doc: ModelDocument) -> dict:
    return {
        "version": FORMAT_VERSION,
        "formulation": (None if doc.formulation is None
                        else _enc_formulation(doc.formulation)),
        "relation": (None if doc.relation is None
                     else _enc_relation(doc.relation)),
        "covering": (None if doc.covering is None
                     else _enc_covering(doc.covering)),
        "statements": doc.statements,
        "aggregation": doc.aggregation,
        "sessions": {sid: encode_session(s)
                     for sid, s in sorted(doc.sessions.items())},
        "transcripts": doc.transcripts,
    }


def decode_document(data: dict) -> ModelDocument:
    if not isinstance(data, dict) or "version" not in data:
        raise ParseError("not a model document: missing version")
    if data["version"] != FORMAT_VERSION:
        raise UnsupportedVersion(
            f"format version {data['version']} not supported "
            f"(expected {FORMAT_VERSION})")
    try:
        return ModelDocument(
            formulation=(None if data.get("formulation") is None
                         else _dec_formulation(data["formulation"])),
            relation=(None if data.get("relation") is None
                      else _dec_relation(data["relation"])),
            covering=(None if data.get("covering") is None
                      else _dec_covering(data["covering"])),
            statements=list(data.get("statements", [])),
            aggregation=data.get("aggregation"),
            sessions={sid: decode_session(s)
                      for sid, s in data.get("sessions", {}).items()},
            transcripts=dict(data.get("transcripts", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed model document: {exc}") from exc


def dumps(doc: ModelDocument) -> str:
    return json.dumps(encode_document(doc), sort_keys=True,
                      separators=(",", ":"), ensure_ascii=False) + "\n"


def save_model(doc: ModelDocument, path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def load_model(path) -> ModelDocument:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at {path}: {exc}") from exc
    return decode_document(data)
