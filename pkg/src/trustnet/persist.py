"""Ingestion and persistence: logs, profiles, config files, snapshots.

Interaction logs and agent profiles travel as JSON lines; configuration is
a flat JSON object; snapshots are a single file holding one JSON document
plus a trailing SHA-256 checksum line.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO, Union

import numpy as np
from scipy import sparse

from .core import (
    AgentProfile,
    CategoryStats,
    EdgeStats,
    Environment,
    Interaction,
    TrustError,
    TrustConfig,
    check_interaction,
)
from .reputation import ReputationModel

SNAPSHOT_FORMAT = "trustnet-snapshot"
SNAPSHOT_VERSION = 1

LOG_FIELDS = ("trustor", "trustee", "rating", "category", "time")

CONFIG_KEYS = {
    "theta_r": "trust_threshold",
    "theta_r_p": "path_threshold",
    "lambda_d": "decay_rate",
    "lambda_p": "recency_rate",
    "d": "path_decay",
    "q": "damping",
    "epsilon": "tolerance",
    "max_iter": "max_iterations",
    "search_steps": "search_steps",
    "search_seconds": "search_seconds",
    "pagerank_seconds": "pagerank_seconds",
}


@dataclass(frozen=True)
class ParseError:
    line: int
    field: Optional[str]
    message: str

    def __str__(self) -> str:
        where = f"line {self.line}"
        if self.field:
            where += f", field {self.field!r}"
        return f"{where}: {self.message}"


class LogParseError(TrustError):
    def __init__(self, error: ParseError):
        super().__init__(str(error))
        self.error = error


class ConfigError(TrustError):
    pass


class SnapshotError(TrustError):
    pass


def _as_stream(source: Union[str, Path, TextIO]) -> TextIO:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8")
    return source


def parse_log(
    source: Union[str, Path, TextIO], strict: bool = False
) -> tuple[list[Interaction], list[ParseError]]:
    """Read a JSON-lines interaction log.

    Returns the valid records in input order together with the list of
    per-line errors.  With ``strict`` the first error raises LogParseError
    instead.  Blank lines are ignored.
    """
    records: list[Interaction] = []
    errors: list[ParseError] = []

    def fail(line_no: int, field: Optional[str], message: str) -> None:
        err = ParseError(line_no, field, message)
        if strict:
            raise LogParseError(err)
        errors.append(err)

    stream = _as_stream(source)
    try:
        for line_no, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                fail(line_no, None, f"invalid JSON: {exc.msg}")
                continue
            if not isinstance(obj, dict):
                fail(line_no, None, "record must be a JSON object")
                continue
            unknown = sorted(set(obj) - set(LOG_FIELDS))
            if unknown:
                fail(line_no, unknown[0], "unexpected field")
                continue
            missing = [f for f in LOG_FIELDS if f not in obj]
            if missing:
                fail(line_no, missing[0], "missing field")
                continue
            problem_field, problem = _check_wire_record(obj)
            if problem is not None:
                fail(line_no, problem_field, problem)
                continue
            records.append(
                Interaction(
                    trustor=obj["trustor"],
                    trustee=obj["trustee"],
                    rating=float(obj["rating"]),
                    category=obj["category"],
                    time=float(obj["time"]),
                )
            )
    finally:
        if isinstance(source, (str, Path)):
            stream.close()
    return records, errors


def _check_wire_record(obj: dict) -> tuple[Optional[str], Optional[str]]:
    for name in ("trustor", "trustee", "category"):
        if not isinstance(obj[name], str) or not obj[name]:
            return name, "must be a non-empty string"
    for name in ("rating", "time"):
        if isinstance(obj[name], bool) or not isinstance(obj[name], (int, float)):
            return name, "must be a number"
    candidate = Interaction(
        trustor=obj["trustor"],
        trustee=obj["trustee"],
        rating=float(obj["rating"]),
        category=obj["category"],
        time=float(obj["time"]),
    )
    problem = check_interaction(candidate)
    if problem is None:
        return None, None
    field = "rating" if "rating" in problem else "time" if "time" in problem else "trustee"
    return field, problem


def dump_log(records: Sequence[Interaction], target: Union[str, Path, TextIO]) -> None:
    """Write records as JSON lines with a fixed field order."""
    own = isinstance(target, (str, Path))
    stream = open(target, "w", encoding="utf-8") if own else target
    try:
        for r in records:
            stream.write(
                json.dumps(
                    {
                        "trustor": r.trustor,
                        "trustee": r.trustee,
                        "rating": r.rating,
                        "category": r.category,
                        "time": r.time,
                    }
                )
                + "\n"
            )
    finally:
        if own:
            stream.close()


def parse_profiles(
    source: Union[str, Path, TextIO], strict: bool = False
) -> tuple[list[AgentProfile], list[ParseError]]:
    """Read JSON-lines agent declarations: {"id", "able", "completed"}."""
    profiles: list[AgentProfile] = []
    errors: list[ParseError] = []

    def fail(line_no: int, field: Optional[str], message: str) -> None:
        err = ParseError(line_no, field, message)
        if strict:
            raise LogParseError(err)
        errors.append(err)

    stream = _as_stream(source)
    try:
        for line_no, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                fail(line_no, None, f"invalid JSON: {exc.msg}")
                continue
            if not isinstance(obj, dict) or not isinstance(obj.get("id"), str) or not obj["id"]:
                fail(line_no, "id", "must be a non-empty string")
                continue
            able = obj.get("able", [])
            completed = obj.get("completed", [])
            ok = all(isinstance(c, str) and c for c in able) and all(
                isinstance(c, str) and c for c in completed
            )
            if not isinstance(able, list) or not isinstance(completed, list) or not ok:
                fail(line_no, "able", "category lists must contain non-empty strings")
                continue
            profiles.append(
                AgentProfile(
                    id=obj["id"], completed=frozenset(completed), able=frozenset(able)
                )
            )
    finally:
        if isinstance(source, (str, Path)):
            stream.close()
    return profiles, errors


def dump_profiles(profiles: Iterable[AgentProfile], target: Union[str, Path, TextIO]) -> None:
    own = isinstance(target, (str, Path))
    stream = open(target, "w", encoding="utf-8") if own else target
    try:
        for p in profiles:
            stream.write(
                json.dumps(
                    {"id": p.id, "able": sorted(p.able), "completed": sorted(p.completed)}
                )
                + "\n"
            )
    finally:
        if own:
            stream.close()


def config_from_dict(data: dict) -> TrustConfig:
    """Build a TrustConfig from flat wire keys, rejecting unknown ones."""
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config key: {unknown[0]!r}")
    kwargs = {}
    for key, value in data.items():
        attr = CONFIG_KEYS[key]
        if attr == "max_iterations":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError("max_iter must be an integer")
        elif attr == "search_steps":
            if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
                raise ConfigError("search_steps must be an integer or null")
        elif value is not None and (
            isinstance(value, bool) or not isinstance(value, (int, float))
        ):
            raise ConfigError(f"{key} must be a number")
        kwargs[attr] = value
    try:
        return TrustConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(source: Union[str, Path, TextIO]) -> TrustConfig:
    """Load a flat key-value JSON config; an empty file means all defaults."""
    stream = _as_stream(source)
    try:
        text = stream.read()
    finally:
        if isinstance(source, (str, Path)):
            stream.close()
    if not text.strip():
        return TrustConfig()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return config_from_dict(data)


def _env_payload(env: Environment) -> dict:
    agents = [
        {
            "id": p.id,
            "completed": sorted(p.completed),
            "able": sorted(p.able),
        }
        for p in (env.agents[a] for a in sorted(env.agents))
    ]
    edges = [
        {
            "src": src,
            "dst": dst,
            "weight": stats.weight,
            "categories": {
                cat: {"count": s.count, "trust": s.decayed_trust, "last_time": s.last_time}
                for cat, s in sorted(stats.per_category.items())
            },
        }
        for (src, dst), stats in sorted(env.edges.items())
    ]
    return {"agents": agents, "edges": edges}


def _model_payload(model: ReputationModel) -> dict:
    coo = model.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    return {
        "nodes": list(model.nodes),
        "entries": [
            [int(coo.row[k]), int(coo.col[k]), float(coo.data[k])] for k in order
        ],
        "vector": [float(x) for x in model.vector],
        "iterations_used": model.iterations_used,
        "converged": model.converged,
        "mean_reputation": model.mean_reputation,
    }


def save_snapshot(
    env: Environment,
    path: Union[str, Path],
    model: Optional[ReputationModel] = None,
) -> str:
    """Write the snapshot file; returns the checksum of the body."""
    digest_src = json.dumps(
        {"snapshot_time": env.snapshot_time, "decay_rate": env.decay_rate}
    ).encode()
    header = {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "snapshot_time": env.snapshot_time,
        "decay_rate": env.decay_rate,
        "config_digest": hashlib.sha256(digest_src).hexdigest(),
    }
    document = {
        "header": header,
        **_env_payload(env),
        "reputation": _model_payload(model) if model is not None else None,
    }
    body = json.dumps(document)
    checksum = hashlib.sha256(body.encode("utf-8")).hexdigest()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(body + "\n" + "sha256:" + checksum + "\n")
    return checksum


def load_snapshot(
    path: Union[str, Path],
) -> tuple[Environment, Optional[ReputationModel]]:
    """Read a snapshot file, verifying checksum and version before parsing."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SnapshotError(f"cannot read snapshot: {exc}") from None
    lines = text.rstrip("\n").split("\n")
    if len(lines) != 2 or not lines[1].startswith("sha256:"):
        raise SnapshotError("checksum mismatch: truncated or malformed snapshot")
    body, tail = lines
    expected = tail[len("sha256:"):]
    actual = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if actual != expected:
        raise SnapshotError("checksum mismatch: snapshot is corrupt")
    document = json.loads(body)
    header = document.get("header", {})
    if header.get("format") != SNAPSHOT_FORMAT:
        raise SnapshotError("not a snapshot file")
    if header.get("version") != SNAPSHOT_VERSION:
        raise SnapshotError(
            f"unsupported snapshot version {header.get('version')!r}, "
            f"expected {SNAPSHOT_VERSION}"
        )

    agents = {
        a["id"]: AgentProfile(
            id=a["id"], completed=frozenset(a["completed"]), able=frozenset(a["able"])
        )
        for a in document["agents"]
    }
    edges = {}
    for e in document["edges"]:
        per_cat = {
            cat: CategoryStats(
                count=s["count"], decayed_trust=s["trust"], last_time=s["last_time"]
            )
            for cat, s in e["categories"].items()
        }
        edges[(e["src"], e["dst"])] = EdgeStats(weight=e["weight"], per_category=per_cat)
    out: dict[str, list[str]] = {}
    for src, dst in edges:
        out.setdefault(src, []).append(dst)
    env = Environment(
        agents=agents,
        edges=edges,
        snapshot_time=header["snapshot_time"],
        decay_rate=header["decay_rate"],
        _out={src: tuple(sorted(dsts)) for src, dsts in out.items()},
    )

    model = None
    rep = document.get("reputation")
    if rep is not None:
        n = len(rep["nodes"])
        rows = [e[0] for e in rep["entries"]]
        cols = [e[1] for e in rep["entries"]]
        data = [e[2] for e in rep["entries"]]
        model = ReputationModel(
            nodes=list(rep["nodes"]),
            matrix=sparse.csr_matrix((data, (rows, cols)), shape=(n, n)),
            vector=np.array(rep["vector"], dtype=float),
            iterations_used=rep["iterations_used"],
            converged=rep["converged"],
            mean_reputation=rep["mean_reputation"],
        )
    return env, model
