"""Subject-typed variant of the data model.

Schools carry per-subject surpluses and deficits, teachers carry the set of
subjects they are qualified to teach plus the one they currently teach.  The
deficit "schools" of this variant are (school, subject) positions, written as
``school:subject`` ids throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, NamedTuple

from .errors import UnknownIdError, ValidationError
from .instance import STAY, DeficitVector, Transfer, _check_id

PURE_SURPLUS = "surplus"
PURE_DEFICIT = "deficit"
MIXED = "mixed"


class TypedSchool(NamedTuple):
    id: str
    surplus: tuple[tuple[str, int], ...]  # (subject, count), subject order
    deficit: tuple[tuple[str, int], ...]

    @property
    def kind(self) -> str:
        if self.surplus and self.deficit:
            return MIXED
        return PURE_SURPLUS if self.surplus else PURE_DEFICIT

    @property
    def surplus_subjects(self) -> tuple[str, ...]:
        return tuple(x for x, _ in self.surplus)

    @property
    def deficit_subjects(self) -> tuple[str, ...]:
        return tuple(y for y, _ in self.deficit)


class TypedTeacher(NamedTuple):
    id: str
    origin: str
    qualified: frozenset[str]
    teaches: str
    acceptable: frozenset[str]  # school ids with some deficit


def position(school_id: str, subject: str) -> str:
    return f"{school_id}:{subject}"


@dataclass(frozen=True)
class TypedInstance:
    subjects: tuple[str, ...]
    schools: tuple[TypedSchool, ...]
    teachers: tuple[TypedTeacher, ...]

    @cached_property
    def school_by_id(self) -> dict[str, TypedSchool]:
        return {s.id: s for s in self.schools}

    @cached_property
    def deficit_positions(self) -> tuple[tuple[str, int], ...]:
        """All (position id, deficit) sinks, in document order."""
        out = []
        for school in self.schools:
            for subject, beta in school.deficit:
                out.append((position(school.id, subject), beta))
        return tuple(out)

    @cached_property
    def surplus_positions(self) -> tuple[tuple[str, int], ...]:
        out = []
        for school in self.schools:
            for subject, alpha in school.surplus:
                out.append((position(school.id, subject), alpha))
        return tuple(out)

    def transferable(self, teacher: TypedTeacher) -> bool:
        """Teachers at surplus schools move; at mixed schools only those
        teaching the surplus subject do; deficit-school staff never move."""
        school = self.school_by_id[teacher.origin]
        if school.kind == PURE_SURPLUS:
            return True
        if school.kind == MIXED:
            return teacher.teaches in school.surplus_subjects
        return False

    @cached_property
    def transferable_teachers(self) -> tuple[TypedTeacher, ...]:
        return tuple(t for t in self.teachers if self.transferable(t))

    def destination_positions(self, teacher: TypedTeacher) -> tuple[str, ...]:
        """Deficit positions the teacher may fill, in document order."""
        out = []
        for school in self.schools:
            if school.id not in teacher.acceptable:
                continue
            for subject, _ in school.deficit:
                if subject in teacher.qualified:
                    out.append(position(school.id, subject))
        return tuple(out)


def validate_typed(doc) -> TypedInstance:
    errors: list[str] = []
    if not isinstance(doc, Mapping):
        raise ValidationError(["typed instance document must be an object"])
    if not isinstance(doc.get("subjects"), list):
        errors.append("field 'subjects' must be a list")
    for key in ("schools", "teachers"):
        if not isinstance(doc.get(key), list) \
                or not all(isinstance(e, Mapping) for e in doc.get(key, ())):
            errors.append(f"field {key!r} must be a list of objects")
    if errors:
        raise ValidationError(errors)

    subjects = tuple(doc["subjects"])
    if len(set(subjects)) != len(subjects) or not subjects:
        errors.append("subjects must be a non-empty list of distinct names")
    subject_order = {x: k for k, x in enumerate(subjects)}

    seen: set[str] = set()

    def claim(raw, what):
        ident = _check_id(raw, errors, what)
        if ident is None:
            return None
        if ident in seen:
            errors.append(f"duplicate id {ident!r}")
            return None
        seen.add(ident)
        return ident

    def per_subject(raw, school_id, what):
        pairs = []
        if raw is None:
            return pairs
        if not isinstance(raw, Mapping):
            errors.append(f"school {school_id!r} has a malformed {what} map")
            return pairs
        for subject, count in raw.items():
            if subject not in subject_order:
                errors.append(f"school {school_id!r} uses unknown subject "
                              f"{subject!r}")
            elif not isinstance(count, int) or count < 1:
                errors.append(f"nonpositive {what} for {school_id!r} in "
                              f"{subject}")
            else:
                pairs.append((subject, count))
        pairs.sort(key=lambda p: subject_order[p[0]])
        return pairs

    schools: list[TypedSchool] = []
    for entry in doc["schools"]:
        ident = claim(entry.get("id"), "school")
        surplus = per_subject(entry.get("surplus"), entry.get("id"), "surplus")
        deficit = per_subject(entry.get("deficit"), entry.get("id"), "deficit")
        both = {x for x, _ in surplus} & {y for y, _ in deficit}
        if both:
            errors.append(f"school {entry.get('id')!r} declares surplus and "
                          f"deficit in the same subject {sorted(both)}")
            continue
        if not surplus and not deficit:
            errors.append(f"school {entry.get('id')!r} has neither surplus "
                          f"nor deficit")
            continue
        if ident is not None:
            schools.append(TypedSchool(ident, tuple(surplus), tuple(deficit)))

    by_id = {s.id: s for s in schools}
    teachers: list[TypedTeacher] = []
    for entry in doc["teachers"]:
        ident = claim(entry.get("id"), "teacher")
        origin = entry.get("school")
        qualified = frozenset(entry.get("qualified") or ())
        teaches = entry.get("teaches")
        raw_acc = entry.get("acceptable") or []
        ok = True
        if origin not in by_id:
            errors.append(f"teacher {entry.get('id')!r} has unknown school "
                          f"{origin!r}")
            ok = False
        if not qualified or not qualified <= set(subjects):
            errors.append(f"teacher {entry.get('id')!r} has invalid "
                          f"qualification set")
            ok = False
        if teaches not in qualified:
            errors.append(f"teacher {entry.get('id')!r} teaches a subject "
                          f"she is not qualified for")
            ok = False
        acceptable = set()
        for a in raw_acc:
            if a == origin:
                errors.append(f"teacher {entry.get('id')!r} lists her own "
                              f"school as acceptable")
                ok = False
            elif a in by_id and by_id[a].deficit:
                acceptable.add(a)
            else:
                errors.append(f"teacher {entry.get('id')!r} accepts "
                              f"{a!r}, which is not a deficit-bearing school")
                ok = False
        if ok and origin in by_id:
            school = by_id[origin]
            # Dual-qualified staff at a mixed school must hold the deficit
            # post; otherwise the school could fix its deficit internally.
            if school.kind == MIXED and qualified & set(school.deficit_subjects) \
                    and teaches in school.surplus_subjects:
                errors.append(f"teacher {entry.get('id')!r} at mixed school "
                              f"{origin!r} must teach the deficit subject")
                ok = False
        if ok and ident is not None:
            teachers.append(TypedTeacher(ident, origin, qualified,
                                         teaches, frozenset(acceptable)))

    if errors:
        raise ValidationError(errors)
    return TypedInstance(subjects, tuple(schools), tuple(teachers))


def typed_to_doc(instance: TypedInstance) -> dict:
    school_order = {s.id: k for k, s in enumerate(instance.schools)}
    subject_order = {x: k for k, x in enumerate(instance.subjects)}
    return {
        "subjects": list(instance.subjects),
        "schools": [
            {"id": s.id,
             **({"surplus": dict(s.surplus)} if s.surplus else {}),
             **({"deficit": dict(s.deficit)} if s.deficit else {})}
            for s in instance.schools
        ],
        "teachers": [
            {"id": t.id, "school": t.origin,
             "qualified": sorted(t.qualified, key=subject_order.__getitem__),
             "teaches": t.teaches,
             "acceptable": sorted(t.acceptable, key=school_order.__getitem__)}
            for t in instance.teachers
        ],
    }


def serialize_typed(instance: TypedInstance) -> str:
    return json.dumps(typed_to_doc(instance), indent=2, sort_keys=True) + "\n"


def parse_typed(text: str) -> TypedInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError([f"malformed document: {exc}"])
    return validate_typed(doc)


def is_feasible_typed(instance: TypedInstance, transfer: Transfer) -> bool:
    """Feasibility of a typed transfer (destinations are position ids)."""
    teacher_ids = {t.id for t in instance.teachers}
    assigned = {t for t, _ in transfer.assignment}
    if assigned != teacher_ids:
        raise UnknownIdError("transfer domain does not match the teachers")

    sink_caps = dict(instance.deficit_positions)
    source_caps = dict(instance.surplus_positions)
    inbound: dict[str, int] = {}
    outbound: dict[str, int] = {}

    for teacher in instance.teachers:
        dest = transfer.destination(teacher.id)
        if dest == STAY:
            continue
        if dest not in sink_caps:
            raise UnknownIdError(f"unknown destination position {dest!r}")
        if not instance.transferable(teacher):
            return False
        school_id, _, subject = dest.partition(":")
        if school_id not in teacher.acceptable \
                or subject not in teacher.qualified:
            return False
        origin_pos = position(teacher.origin, teacher.teaches)
        outbound[origin_pos] = outbound.get(origin_pos, 0) + 1
        inbound[dest] = inbound.get(dest, 0) + 1

    if any(outbound[p] > source_caps.get(p, 0) for p in outbound):
        return False
    if any(inbound[p] > sink_caps[p] for p in inbound):
        return False
    return True


def post_transfer_deficits_typed(instance: TypedInstance,
                                 transfer: Transfer) -> DeficitVector:
    from .errors import InfeasibleTransferError

    if not is_feasible_typed(instance, transfer):
        raise InfeasibleTransferError("typed transfer is infeasible")
    counts = transfer.inbound_counts()
    ids = tuple(p for p, _ in instance.deficit_positions)
    return DeficitVector(
        ids, tuple(beta - counts.get(p, 0)
                   for p, beta in instance.deficit_positions))
