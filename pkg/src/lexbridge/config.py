"""Declarative pipeline configuration (JSON) and its validation."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .corpus import InputError
from .mixed_wc import MarkerScheme
from .monoindex import POLICIES
from .smt.translator import SMTConfig, validate_smt_config

MODES = ("mixed", "mixed-dic", "pseudo", "pseudo-dic", "pseudo-mixed", "pseudo-mixed-dic")


class ConfigError(InputError):
    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("invalid config:\n  " + "\n  ".join(errors))


@dataclass(frozen=True)
class PipelineConfig:
    mode: str
    bitext_source: str
    bitext_target: str
    output_dir: str
    dictionary: str | None = None
    monolingual: str | None = None
    u_src: int = 10
    u_tgt: int = 8
    K: int = 10
    max_len: int = 50
    smt: SMTConfig = field(default_factory=SMTConfig)
    policy: str = "shortest"
    seed: int = 0
    threads: int = 1
    markers: MarkerScheme = field(default_factory=MarkerScheme)

    @property
    def pseudo(self) -> bool:
        return self.mode.startswith("pseudo")

    @property
    def mixed(self) -> bool:
        return "mixed" in self.mode

    @property
    def use_dic(self) -> bool:
        return self.mode.endswith("-dic")

    def to_dict(self) -> dict:
        """Nested form with every default filled in, as accepted by ``validate_config``."""
        return {
            "mode": self.mode,
            "paths": {
                "bitext_source": self.bitext_source,
                "bitext_target": self.bitext_target,
                "dictionary": self.dictionary,
                "monolingual": self.monolingual,
                "output_dir": self.output_dir,
            },
            "thresholds": {"source": self.u_src, "target": self.u_tgt},
            "K": self.K,
            "max_len": self.max_len,
            "smt": asdict(self.smt),
            "selection": {"policy": self.policy, "seed": self.seed},
            "markers": asdict(self.markers),
            "threads": self.threads,
        }


_SMT_FIELDS = {f.name: f.type for f in fields(SMTConfig)}
_MARKER_FIELDS = ("begin", "middle", "end")


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def apply_override(raw: dict, assignment: str) -> None:
    """Apply ``dotted.key=value``; the value is parsed as JSON, falling back to a string."""
    key, sep, value = assignment.partition("=")
    if not sep or not key:
        raise ConfigError([f"override {assignment!r}: expected key=value"])
    try:
        parsed = json.loads(value)
    except json.JSONDecodeError:
        parsed = value
    node = raw
    parts = key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError([f"override {key}: {part} is not a section"])
    node[parts[-1]] = parsed


def validate_config(raw_text: str, base_dir: str | Path | None = None,
                    overrides: list[str] = ()) -> PipelineConfig:
    """Parse and check a JSON config; every violation is reported, keyed by path.

    Relative paths resolve against ``base_dir``.
    """
    try:
        raw = json.loads(raw_text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"<root>: not valid JSON ({exc})"]) from None
    if not isinstance(raw, dict):
        raise ConfigError(["<root>: expected an object"])
    for ov in overrides:
        apply_override(raw, ov)

    errors: list[str] = []
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    known = {"mode", "paths", "thresholds", "K", "max_len", "smt", "selection", "markers", "threads"}
    errors.extend(f"{k}: unknown key" for k in sorted(set(raw) - known))

    def section(name) -> dict:
        value = raw.get(name, {})
        if not isinstance(value, dict):
            errors.append(f"{name}: expected an object")
            return {}
        return value

    mode = raw.get("mode")
    if mode not in MODES:
        errors.append(f"mode: must be one of {', '.join(MODES)} (got {mode!r})")

    paths = section("paths")
    path_keys = ("bitext_source", "bitext_target", "dictionary", "monolingual", "output_dir")
    errors.extend(f"paths.{k}: unknown key" for k in sorted(set(paths) - set(path_keys)))
    resolved: dict[str, str | None] = {}
    needed = {"bitext_source", "bitext_target", "output_dir"}
    if mode != "mixed":
        needed.add("dictionary")
    if isinstance(mode, str) and mode.startswith("pseudo"):
        needed.add("monolingual")
    for key in path_keys:
        value = paths.get(key)
        if value is None:
            if key in needed:
                errors.append(f"paths.{key}: required for mode {mode!r}")
            resolved[key] = None
            continue
        if not isinstance(value, str) or not value:
            errors.append(f"paths.{key}: expected a path string")
            resolved[key] = None
            continue
        p = Path(value)
        p = p if p.is_absolute() else base / p
        if key != "output_dir" and not p.is_file():
            errors.append(f"paths.{key}: file not found: {p}")
        resolved[key] = str(p)

    thresholds = section("thresholds")
    errors.extend(f"thresholds.{k}: unknown key" for k in sorted(set(thresholds) - {"source", "target"}))
    u = {}
    for key, default in (("source", 10), ("target", 8)):
        value = thresholds.get(key, default)
        if not _is_int(value) or value < 1:
            errors.append(f"thresholds.{key}: must be an integer >= 1")
        u[key] = value

    ints = {}
    for key, default, lo in (("K", 10, 0), ("max_len", 50, 1), ("threads", 1, 1)):
        value = raw.get(key, default)
        if not _is_int(value) or value < lo:
            errors.append(f"{key}: must be an integer >= {lo}")
        ints[key] = value

    smt_raw = section("smt")
    smt_kwargs = {}
    for key, value in smt_raw.items():
        if key not in _SMT_FIELDS:
            errors.append(f"smt.{key}: unknown key")
            continue
        kind = _SMT_FIELDS[key]
        ok = (isinstance(value, bool) if kind == "bool"
              else _is_int(value) if kind == "int" else _is_num(value))
        if not ok:
            errors.append(f"smt.{key}: expected {kind}")
            continue
        smt_kwargs[key] = value
    smt = SMTConfig(**smt_kwargs)
    errors.extend(f"smt.{e}" for e in validate_smt_config(smt))

    selection = section("selection")
    errors.extend(f"selection.{k}: unknown key" for k in sorted(set(selection) - {"policy", "seed"}))
    policy = selection.get("policy", "shortest")
    if policy not in POLICIES:
        errors.append(f"selection.policy: must be one of {', '.join(POLICIES)}")
    seed = selection.get("seed", 0)
    if not _is_int(seed):
        errors.append("selection.seed: must be an integer")

    markers_raw = section("markers")
    errors.extend(f"markers.{k}: unknown key" for k in sorted(set(markers_raw) - set(_MARKER_FIELDS)))
    markers = MarkerScheme()
    try:
        markers = MarkerScheme(**{k: v for k, v in markers_raw.items() if k in _MARKER_FIELDS})
    except (InputError, TypeError) as exc:
        errors.append(f"markers: {exc}")

    if errors:
        raise ConfigError(errors)
    return PipelineConfig(
        mode=mode,
        bitext_source=resolved["bitext_source"],
        bitext_target=resolved["bitext_target"],
        output_dir=resolved["output_dir"],
        dictionary=resolved["dictionary"],
        monolingual=resolved["monolingual"],
        u_src=u["source"], u_tgt=u["target"],
        K=ints["K"], max_len=ints["max_len"], threads=ints["threads"],
        smt=smt, policy=policy, seed=seed, markers=markers,
    )


def load_config(path: str | Path, overrides: list[str] = ()) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"<file>: cannot read {path}: {exc.strerror}"]) from None
    return validate_config(text, path.parent, overrides)
