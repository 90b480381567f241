"""Profile documents: the JSON form of solved profiles and their reports."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from flat import FlatProblem, FlatProblemError, FlatProfile, assemble_profile, expected_asymptotics
from momentum import (
    BundleProblem,
    BundleProblemError,
    BundleProfile,
    CaseTag,
    assemble_bundle_profile,
    growth_rates,
    infinity_asymptotics,
    pmy_coefficients,
)
from polycore import PolynomialError, PolyQ, format_rational, parse_exact
from projective import ProjectiveProfile

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
KINDS = ("flat", "bundle", "projective")


class DocumentError(Exception):
    """Raised when a profile document is missing, malformed or inconsistent."""

    pass


def _fmt(value: Fraction | None) -> str | None:
    return None if value is None else format_rational(Fraction(value))


def _exact(value: str | None, name: str) -> Fraction | None:
    if value is None:
        return None
    try:
        return parse_exact(value)
    except PolynomialError as e:
        raise DocumentError(f"{name}: {e}") from e


def poly_to_strings(p: PolyQ) -> list[str]:
    """Coefficients lowest degree first, each as "p/q"."""
    return [format_rational(c) for c in p.coefficients]


def poly_from_strings(values, name: str) -> PolyQ:
    if not isinstance(values, list):
        raise DocumentError(f"{name} must be a list of coefficients")
    return PolyQ.from_coefficients(_exact(str(v), f"{name}[{i}]") for i, v in enumerate(values))


@dataclass
class ProfileDocument:
    """Serialisable record of a solved profile.

    Every exact value is a "p/q" string, so ``from_json(to_json())`` gives back
    an equal document.
    """

    kind: str
    problem: dict[str, str]
    polynomials: dict[str, list[str]]
    constants: dict[str, str | None] = field(default_factory=dict)
    case_tag: str | None = None
    total_space: str | None = None
    endpoint_class: str | None = None
    asymptotics: list[str] = field(default_factory=list)
    solutions: list[dict[str, str | None]] = field(default_factory=list)
    tolerances: dict[str, float] = field(default_factory=dict)
    snaps: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    verification: dict | None = None
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data) -> ProfileDocument:
        """Validate and build a document from parsed JSON.

        Raises:
            DocumentError: If required keys are missing or have the wrong type
        """
        if not isinstance(data, dict):
            raise DocumentError("profile document must be a JSON object")
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise DocumentError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION!r}")
        for key in ("kind", "problem", "polynomials"):
            if key not in data:
                raise DocumentError(f"profile document is missing {key!r}")
        if data["kind"] not in KINDS:
            raise DocumentError(f"unknown document kind {data['kind']!r}")
        if not isinstance(data["problem"], dict) or not isinstance(data["polynomials"], dict):
            raise DocumentError("'problem' and 'polynomials' must be objects")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise DocumentError(f"unknown document keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> ProfileDocument:
        if not text.strip():
            raise DocumentError("profile document is empty")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError(f"profile document is not valid JSON: {e}") from e
        return cls.from_dict(data)

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        logger.info("wrote %s document to %s", self.kind, path)
        return path


def load_document(path: str | Path) -> ProfileDocument:
    """Read a document from disk.

    Raises:
        DocumentError: If the file is missing, empty or malformed
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}") from e
    return ProfileDocument.from_json(text)


# ==================== Building documents ====================


def flat_document(profile: FlatProfile) -> ProfileDocument:
    problem = profile.problem
    return ProfileDocument(
        kind="flat",
        problem={"n": str(problem.n), "a": _fmt(problem.a), "c": _fmt(problem.c)},
        polynomials={"F": poly_to_strings(profile.F)},
        constants={
            "c1": _fmt(profile.c1),
            "c2": _fmt(profile.c2),
            "b": _fmt(profile.b),
            "b_width": _fmt(profile.b_width),
            "kappa": _fmt(profile.kappa),
            "phi0": _fmt(profile.phi0),
            "t_normalization": repr(profile.t_normalization),
        },
        endpoint_class=profile.endpoint_class.value,
        asymptotics=[model.describe() for model in expected_asymptotics(profile)],
    )


def _bundle_constants(profile: BundleProfile) -> dict[str, str | None]:
    constants = {
        "b": _fmt(profile.b),
        "b_width": _fmt(profile.b_width),
        "kappa_a": _fmt(profile.kappa_a),
        "kappa_b": _fmt(profile.kappa_b),
        "degree_gap": str(profile.degree_gap),
        "tau0": _fmt(profile.tau0),
        "nu_offset": repr(profile.nu_offset),
    }
    if profile.allowable is not None:
        constants["c0"] = _fmt(profile.allowable.c0)
        constants["allowable_case"] = profile.allowable.case.value
    if profile.b is None and profile.degree_gap == 1:
        theta1, theta2 = growth_rates(profile)
        constants["theta1"] = _fmt(theta1)
        constants["theta2"] = _fmt(theta2)
    return constants


def _bundle_models(profile: BundleProfile) -> list[str]:
    models = []
    for build in (pmy_coefficients, infinity_asymptotics):
        try:
            models.append(build(profile).describe())
        except BundleProblemError as e:
            logger.warning("no asymptotic model: %s", e)
    return models


def bundle_document(profile: BundleProfile, others: list[BundleProfile] | None = None) -> ProfileDocument:
    """Document for ``profile``; ``others`` are further solutions of the same solve."""
    problem = profile.problem
    solutions = [
        {"b": _fmt(p.b), "c_M": _fmt(p.problem.c_M), "c": _fmt(p.problem.c)}
        for p in [profile, *(others or [])]
    ]
    return ProfileDocument(
        kind="bundle",
        problem={
            "m": str(problem.m),
            "n": str(problem.n),
            "lambda": _fmt(problem.lam),
            "c_M": _fmt(problem.c_M),
            "c": _fmt(problem.c),
            "a": _fmt(problem.a),
        },
        polynomials={"P": poly_to_strings(profile.P), "Q": poly_to_strings(profile.Q)},
        constants=_bundle_constants(profile),
        case_tag=profile.case_tag.value,
        total_space=profile.total_space.value,
        asymptotics=_bundle_models(profile),
        solutions=solutions if others else [],
        notes=list(profile.notes),
    )


def projective_document(profile: ProjectiveProfile, others: list[ProjectiveProfile] | None = None) -> ProfileDocument:
    """Document for a ProjectiveProfile; ``others`` are further roots of the same solve."""
    document = bundle_document(profile.base)
    document.kind = "projective"
    document.constants["extension_ok"] = str(profile.extension_ok).lower()
    document.constants["c_M_requested"] = _fmt(profile.c_M_requested)
    if others:
        document.solutions = [
            {"b": _fmt(p.b), "c_M": _fmt(p.c_M), "c": _fmt(p.c)} for p in [profile, *others]
        ]
    return document


# ==================== Loading profiles ====================


def _problem_value(document: ProfileDocument, key: str) -> Fraction:
    if key not in document.problem:
        raise DocumentError(f"problem is missing {key!r}")
    return _exact(document.problem[key], key)


def _problem_int(document: ProfileDocument, key: str) -> int:
    value = _problem_value(document, key)
    if value.denominator != 1:
        raise DocumentError(f"{key} must be an integer, got {value}")
    return int(value)


def _polynomial(document: ProfileDocument, name: str) -> PolyQ:
    if name not in document.polynomials:
        raise DocumentError(f"document has no polynomial {name!r}")
    return poly_from_strings(document.polynomials[name], name)


def flat_problem_of(document: ProfileDocument) -> tuple[FlatProblem, PolyQ]:
    try:
        problem = FlatProblem(_problem_int(document, "n"), _problem_value(document, "a"), _problem_value(document, "c"))
    except FlatProblemError as e:
        raise DocumentError(str(e)) from e
    return problem, _polynomial(document, "F")


def bundle_problem_of(document: ProfileDocument) -> tuple[BundleProblem, PolyQ, Fraction | None]:
    """(problem, P, b) as recorded, without any consistency checks."""
    try:
        problem = BundleProblem(
            _problem_int(document, "m"),
            _problem_int(document, "n"),
            _problem_value(document, "lambda"),
            _problem_value(document, "c_M"),
            _problem_value(document, "c"),
            _problem_value(document, "a"),
        )
    except BundleProblemError as e:
        raise DocumentError(str(e)) from e
    return problem, _polynomial(document, "P"), _exact(document.constants.get("b"), "b")


def load_flat_profile(document: ProfileDocument) -> FlatProfile:
    """Rebuild the profile from the recorded F.

    F is taken as written, so a corrupted F reaches the oracle unchanged.
    """
    problem, F = flat_problem_of(document)
    c1 = _exact(document.constants.get("c1"), "c1")
    c2 = _exact(document.constants.get("c2"), "c2")
    return assemble_profile(problem, F, c1=c1, c2=c2)


def load_bundle_profile(document: ProfileDocument) -> BundleProfile:
    """Rebuild a bundle profile from the recorded P.

    Raises:
        DocumentError: If the case tag is missing or unknown
        BundleProblemError: If P no longer satisfies the profile conditions
    """
    problem, P, b = bundle_problem_of(document)
    try:
        case = CaseTag(document.case_tag)
    except ValueError as e:
        raise DocumentError(f"unknown case tag {document.case_tag!r}") from e
    return assemble_bundle_profile(problem, case, P=P, notes=tuple(document.notes), known_root=b)


def load_projective_profile(document: ProfileDocument) -> ProjectiveProfile:
    """Rebuild a ProjectiveProfile from the recorded P and b."""
    base = load_bundle_profile(document)
    if base.b is None:
        raise DocumentError("projective document has no end point b")
    return ProjectiveProfile(
        base=base,
        b=base.b,
        extension_ok=document.constants.get("extension_ok") == "true",
        c_M_requested=_exact(document.constants.get("c_M_requested"), "c_M_requested"),
    )
