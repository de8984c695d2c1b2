"""Brute-force ground truth, kept independent of the flow machinery.

Feasibility here is checked by direct counting against the three transfer
constraints, never by running flows, so agreement between this module and
the solver is evidence rather than tautology.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .errors import CapExceededError, SolverDefectError, UnknownIdError
from .instance import STAY, DeficitVector, Instance, Transfer

DEFAULT_ENUMERATION_CAP = 10_000_000


def descending_prefix_sums(values: Iterable) -> tuple:
    """Prefix sums of the values sorted from highest to lowest."""
    out = []
    running = 0
    for v in sorted(values, reverse=True):
        running = running + v
        out.append(running)
    return tuple(out)


def _as_values(vector) -> tuple:
    if isinstance(vector, DeficitVector):
        return vector.values
    return tuple(vector)


def lorenz_dominates(first, second) -> bool:
    """True when every descending prefix sum of first is <= second's.

    This is weak majorization: the dominating vector is the more equal,
    lower-deficit one.  The relation is a partial preorder; two vectors can
    easily be incomparable.
    """
    a = _as_values(first)
    b = _as_values(second)
    if len(a) != len(b):
        raise ValueError("vectors have different dimensions")
    return all(x <= y for x, y in
               zip(descending_prefix_sums(a), descending_prefix_sums(b)))


def _option_table(instance: Instance,
                  acceptable: Mapping[str, frozenset[str]] | None):
    """Per-teacher destination options (deficit indices, then STAY)."""
    index = instance.deficit_index
    teachers = sorted(instance.teachers, key=lambda t: t.id)
    table = []
    for teacher in teachers:
        if acceptable is None:
            wanted = teacher.acceptable
        else:
            wanted = acceptable.get(teacher.id, teacher.acceptable)
        options = sorted((index[a] for a in wanted if a in index))
        table.append((teacher, options))
    return table


def _check_cap(table, cap):
    size = 1
    for _, options in table:
        size *= len(options) + 1
        if size > cap:
            raise CapExceededError(
                f"transfer space exceeds the enumeration cap {cap}",
                limit=cap, actual=size)
    return size


def iter_outcomes(instance: Instance, *,
                  acceptable: Mapping[str, frozenset[str]] | None = None,
                  cap: int = DEFAULT_ENUMERATION_CAP
                  ) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Yield (destinations, post-transfer deficits) for every feasible
    transfer, destinations as deficit indices with len(D) meaning STAY.

    Teachers are taken in id order and options in destination order, which
    makes the stream ascend in the fixed tie-breaking order used by the
    mechanism.  Surplus and deficit headroom is tracked during the
    recursion, so infeasible branches are pruned immediately.
    """
    table = _option_table(instance, acceptable)
    _check_cap(table, cap)

    betas = [d.beta for d in instance.deficit_schools]
    stay = len(betas)
    room = betas[:]                      # remaining capacity per school
    spare = dict(instance.alphas)        # remaining surplus per school
    chosen: list[int] = []

    def recurse(position: int) -> Iterator:
        if position == len(table):
            yield tuple(chosen), tuple(room[k] for k in range(len(betas)))
            return
        teacher, options = table[position]
        for dest in options:
            if room[dest] > 0 and spare[teacher.origin] > 0:
                room[dest] -= 1
                spare[teacher.origin] -= 1
                chosen.append(dest)
                yield from recurse(position + 1)
                chosen.pop()
                room[dest] += 1
                spare[teacher.origin] += 1
        chosen.append(stay)
        yield from recurse(position + 1)
        chosen.pop()

    return recurse(0)


def _to_transfer(instance: Instance, destinations: tuple[int, ...]) -> Transfer:
    ids = instance.deficit_ids
    teachers = sorted(instance.teacher_ids)
    stay = len(ids)
    return Transfer.from_mapping(
        {t: (STAY if d == stay else ids[d])
         for t, d in zip(teachers, destinations)})


def enumerate_transfers(instance: Instance, *,
                        acceptable: Mapping[str, frozenset[str]] | None = None,
                        cap: int = DEFAULT_ENUMERATION_CAP
                        ) -> Iterator[Transfer]:
    """All feasible transfers, in the mechanism's tie-breaking order."""
    for destinations, _ in iter_outcomes(instance, acceptable=acceptable,
                                         cap=cap):
        yield _to_transfer(instance, destinations)


def dominant_outcomes(instance: Instance, *,
                      acceptable: Mapping[str, frozenset[str]] | None = None,
                      cap: int = DEFAULT_ENUMERATION_CAP):
    """Scan the whole transfer space for the Lorenz-dominant outcomes.

    Returns (multiset, destination tuples) where multiset is the common
    descending deficit profile of the winners.  A dominant outcome always
    exists for these instances; its absence is reported as a defect.
    """
    best_prefix = None
    winners: list[tuple[int, ...]] = []
    for destinations, deficits in iter_outcomes(instance,
                                                acceptable=acceptable,
                                                cap=cap):
        prefix = descending_prefix_sums(deficits)
        if best_prefix is None:
            best_prefix = prefix
            winners = [destinations]
            continue
        if prefix == best_prefix:
            winners.append(destinations)
            continue
        if all(x <= y for x, y in zip(prefix, best_prefix)):
            best_prefix = prefix
            winners = [destinations]
        elif not all(y <= x for x, y in zip(prefix, best_prefix)):
            # incomparable with the current best: the true optimum, if any,
            # must dominate both, so track the pointwise minimum.
            best_prefix = tuple(min(x, y)
                                for x, y in zip(prefix, best_prefix))
            winners = []

    if best_prefix is None:
        raise SolverDefectError("instance has no transfers at all")
    if not winners:
        raise SolverDefectError("no Lorenz-dominant transfer exists",
                                prefix=best_prefix)
    multiset = []
    previous = 0
    for total in best_prefix:
        multiset.append(total - previous)
        previous = total
    return tuple(multiset), winners


def brute_force_lorenz_dominant(instance: Instance, *,
                                cap: int = DEFAULT_ENUMERATION_CAP
                                ) -> tuple[tuple, tuple[Transfer, ...]]:
    """The dominant deficit multiset and every transfer achieving it."""
    multiset, winners = dominant_outcomes(instance, cap=cap)
    return multiset, tuple(_to_transfer(instance, w) for w in winners)


def brute_force_v(instance: Instance, subset: Iterable[str], *,
                  cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Largest number of teachers any transfer places into the subset."""
    chosen = set(subset)
    unknown = chosen - set(instance.deficit_index)
    if unknown:
        raise UnknownIdError(f"not deficit schools: {sorted(unknown)}")
    indices = {instance.deficit_index[d] for d in chosen}
    best = 0
    for destinations, _ in iter_outcomes(instance, cap=cap):
        best = max(best, sum(1 for d in destinations if d in indices))
    return best
