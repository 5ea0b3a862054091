# Copyright 2024 The vqaopt Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Airline crew pairing: legs, duties, pairings and their cost.

A duty is a same-day sequence of connecting legs. A pairing is a sequence of
duties leaving a home base and closing at the first duty that arrives back
at that base. The crew pairing problem picks pairings covering every leg
exactly once at minimum cost, which is a minimum cost exact cover.
"""
import csv
from dataclasses import asdict, dataclass, field, fields
from datetime import date, datetime, time, timedelta
import json
import logging
from pathlib import Path
from typing import (Any,
                    Dict,
                    FrozenSet,
                    Iterable,
                    List,
                    Optional,
                    Sequence,
                    Tuple,
                    Union)

import numpy as np

from . import io
from .encodings import McecInstance, selection_from_bitstring
from .exceptions import ConfigError, InvalidInstance, ParseError
from .problem import ProblemInstance

LOGGER = logging.getLogger(__name__)

LEG_COLUMNS = ('id',
               'departure_airport',
               'arrival_airport',
               'departure_time',
               'arrival_time')

HOME_BASES_DIRECTIVE = 'home-bases:'

OFF_HOURS_END = time(5, 0)
OFF_HOURS_START = time(20, 0)


@dataclass(frozen=True)
class FlightLeg:
    """A flight from a departure airport to an arrival airport."""
    id: str
    departure_airport: str
    arrival_airport: str
    departure_time: datetime
    arrival_time: datetime

    def __post_init__(self):
        if not self.arrival_time > self.departure_time:
            raise InvalidInstance(f'Leg {self.id}: arrival must be after '
                                  'departure.')

    @property
    def block_minutes(self) -> int:
        return _minutes(self.arrival_time - self.departure_time)

    def to_dict(self) -> dict:
        return {
            'id': self.id,
            'departure_airport': self.departure_airport,
            'arrival_airport': self.arrival_airport,
            'departure_time': io.datetime_to_str(self.departure_time),
            'arrival_time': io.datetime_to_str(self.arrival_time)
        }


@dataclass(frozen=True)
class Duty:
    """Connecting legs flown on one calendar day."""
    legs: Tuple[FlightLeg, ...]

    def __post_init__(self):
        if not self.legs:
            raise InvalidInstance('A duty needs at least one leg.')
        object.__setattr__(self, 'legs', tuple(self.legs))

    @property
    def day(self) -> date:
        return self.legs[0].departure_time.date()

    @property
    def start(self) -> datetime:
        return self.legs[0].departure_time

    @property
    def end(self) -> datetime:
        return self.legs[-1].arrival_time

    @property
    def origin(self) -> str:
        return self.legs[0].departure_airport

    @property
    def destination(self) -> str:
        return self.legs[-1].arrival_airport

    @property
    def duration_minutes(self) -> int:
        return _minutes(self.end - self.start)

    @property
    def work_minutes(self) -> int:
        return sum(leg.block_minutes for leg in self.legs)

    @property
    def leg_ids(self) -> Tuple[str, ...]:
        return tuple(leg.id for leg in self.legs)

    @property
    def label(self) -> str:
        return '-'.join(self.leg_ids)


@dataclass(frozen=True)
class Pairing:
    """Duties centered around a home base."""
    duties: Tuple[Duty, ...]
    home_base: str
    cost: float = 0.0

    @property
    def legs(self) -> Tuple[FlightLeg, ...]:
        return tuple(leg for duty in self.duties for leg in duty.legs)

    @property
    def leg_ids(self) -> Tuple[str, ...]:
        return tuple(leg.id for leg in self.legs)

    @property
    def start(self) -> datetime:
        return self.duties[0].start

    @property
    def end(self) -> datetime:
        return self.duties[-1].end

    @property
    def label(self) -> str:
        """Leg ids, '-' within a duty and '|' between duties."""
        return '|'.join(duty.label for duty in self.duties)


@dataclass(frozen=True)
class RuleConfig:
    """Parametric feasibility rules for duties and pairings."""
    max_flights: int = 4
    min_connect: float = 30  # minutes
    max_duty_duration: float = 12  # hours
    max_duties: int = 5
    min_rest: float = 9.5  # hours
    max_pairing_duration: float = 4  # days
    max_work_time: float = 8  # hours

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f'Rule {f.name} must be a number, got '
                                  f'{value!r}.')
            if not value > 0:
                raise ConfigError(f'Rule {f.name} must be strictly positive, '
                                  f'got {value}.')

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> 'RuleConfig':
        return cls(**_known_fields(cls, data or {}, 'rules'))


@dataclass(frozen=True)
class CostModel:
    """Away-night and off-hour penalties.

    Off hours are [00:00, 05:00) and [20:00, 24:00), counted over block time.
    """
    night_penalty: float = 100.0
    offhour_penalty: float = 1.0  # per minute

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ConfigError(f'Cost parameter {f.name} must be '
                                  'nonnegative.')

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> 'CostModel':
        return cls(**_known_fields(cls, data or {}, 'cost'))


@dataclass(frozen=True)
class AcpInstance:
    legs: Tuple[FlightLeg, ...]
    pairings: Tuple[Pairing, ...]
    home_bases: FrozenSet[str]
    rules: RuleConfig = field(default_factory=RuleConfig)
    cost_model: CostModel = field(default_factory=CostModel)

    def __post_init__(self):
        object.__setattr__(self, 'legs', tuple(self.legs))
        object.__setattr__(self, 'pairings', tuple(self.pairings))
        object.__setattr__(self, 'home_bases', frozenset(self.home_bases))
        ids = [leg.id for leg in self.legs]
        if len(set(ids)) != len(ids):
            raise InvalidInstance('Flight leg ids must be unique.')
        known = set(self.legs)
        for pairing in self.pairings:
            if not set(pairing.legs) <= known:
                raise InvalidInstance(f'Pairing {pairing.label} references '
                                      'legs outside the instance.')

    def __repr__(self):
        return (f'<AcpInstance legs={len(self.legs)} '
                f'pairings={len(self.pairings)}>')

    def to_dict(self) -> dict:
        """Self-contained description; pairings are regenerated on load."""
        return {
            'legs': [leg.to_dict() for leg in self.legs],
            'home_bases': sorted(self.home_bases),
            'rules': asdict(self.rules),
            'cost': asdict(self.cost_model)
        }


def _minutes(delta: timedelta) -> int:
    return int(delta.total_seconds() // 60)


def _known_fields(cls, data: dict, section: str) -> dict:
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f'Unknown {section} parameters: '
                          f'{", ".join(sorted(unknown))}')
    return dict(data)


def _leg_order(leg: FlightLeg):
    return (leg.departure_time, leg.id)


def generate_duties(legs: Sequence[FlightLeg],
                    rules: Optional[RuleConfig] = None) -> List[Duty]:
    """All valid duties, sorted by their leg ids.

    Legs are partitioned by departure date and each day is searched
    depth-first. Duration and work time only grow when a leg is appended,
    so a branch is cut as soon as either cap is exceeded.
    """
    rules = rules or RuleConfig()
    by_day: Dict[date, List[FlightLeg]] = {}
    for leg in sorted(legs, key=_leg_order):
        by_day.setdefault(leg.departure_time.date(), []).append(leg)

    max_duration = rules.max_duty_duration * 60
    max_work = rules.max_work_time * 60
    min_connect = timedelta(minutes=rules.min_connect)

    duties: List[Duty] = []

    def extend(path: List[FlightLeg], work: int, day_legs: List[FlightLeg]):
        duties.append(Duty(tuple(path)))
        if len(path) >= rules.max_flights:
            return
        last = path[-1]
        for leg in day_legs:
            if leg.departure_airport != last.arrival_airport:
                continue
            if leg.departure_time < last.arrival_time + min_connect:
                continue
            total = work + leg.block_minutes
            duration = _minutes(leg.arrival_time - path[0].departure_time)
            if total > max_work or duration > max_duration:
                continue
            extend(path + [leg], total, day_legs)

    for day, day_legs in sorted(by_day.items()):
        for leg in day_legs:
            if (leg.block_minutes > max_work
                    or leg.block_minutes > max_duration):
                continue
            extend([leg], leg.block_minutes, day_legs)

    duties.sort(key=lambda d: d.leg_ids)
    LOGGER.debug(f'Generated {len(duties)} duties from {len(legs)} legs.')
    return duties


def generate_pairings(duties: Sequence[Duty],
                      home_bases: Iterable[str],
                      rules: Optional[RuleConfig] = None,
                      cost_model: Optional[CostModel] = None) -> List[Pairing]:
    """All valid pairings with their cost, sorted by their leg ids.

    Every duty sequence that arrives back at its home base is a pairing,
    including sequences that already passed through the base on an earlier
    night.
    """
    rules = rules or RuleConfig()
    cost_model = cost_model or CostModel()
    bases = set(home_bases)
    min_rest = timedelta(hours=rules.min_rest)
    max_span = rules.max_pairing_duration * 24 * 60

    ordered = sorted(duties, key=lambda d: (d.start, d.leg_ids))
    pairings: List[Pairing] = []

    def extend(path: List[Duty], home: str):
        last = path[-1]
        if last.destination == home:
            pairing = Pairing(tuple(path), home)
            cost = pairing_cost(pairing, cost_model)
            pairings.append(Pairing(tuple(path), home, cost))
        if len(path) >= rules.max_duties:
            return
        for duty in ordered:
            if duty.origin != last.destination:
                continue
            if duty.start < last.end + min_rest:
                continue
            if _minutes(duty.end - path[0].start) > max_span:
                continue
            extend(path + [duty], home)

    for duty in ordered:
        if duty.origin in bases and duty.duration_minutes <= max_span:
            extend([duty], duty.origin)

    pairings.sort(key=lambda p: (p.leg_ids, p.home_base))
    LOGGER.debug(f'Generated {len(pairings)} pairings from {len(duties)} '
                 'duties.')
    return pairings


def away_nights(pairing: Pairing) -> int:
    """Calendar-date boundaries crossed while resting away from home."""
    nights = 0
    for prev, nxt in zip(pairing.duties, pairing.duties[1:]):
        if prev.destination != pairing.home_base:
            nights += (nxt.start.date() - prev.end.date()).days
    return nights


def offhour_minutes(leg: FlightLeg) -> int:
    """Block minutes in [00:00, 05:00) or [20:00, 24:00)."""
    total = 0
    day = leg.departure_time.date()
    while datetime.combine(day, time()) < leg.arrival_time:
        midnight = datetime.combine(day, time())
        for lo, hi in ((midnight, datetime.combine(day, OFF_HOURS_END)),
                       (datetime.combine(day, OFF_HOURS_START),
                        midnight + timedelta(days=1))):
            overlap = (min(hi, leg.arrival_time) -
                       max(lo, leg.departure_time))
            if overlap > timedelta(0):
                total += _minutes(overlap)
        day += timedelta(days=1)
    return total


def pairing_cost(pairing: Pairing,
                 cost_model: Optional[CostModel] = None) -> float:
    """Away nights times the night penalty plus off-hour work minutes times
    the off-hour penalty."""
    cost_model = cost_model or CostModel()
    offhours = sum(offhour_minutes(leg) for leg in pairing.legs)
    return float(away_nights(pairing) * cost_model.night_penalty +
                 offhours * cost_model.offhour_penalty)


def build_instance(legs: Sequence[FlightLeg],
                   home_bases: Iterable[str],
                   rules: Optional[RuleConfig] = None,
                   cost_model: Optional[CostModel] = None) -> AcpInstance:
    """Enumerate duties and pairings for a schedule."""
    rules = rules or RuleConfig()
    cost_model = cost_model or CostModel()
    legs = sorted(legs, key=_leg_order)
    duties = generate_duties(legs, rules)
    pairings = generate_pairings(duties, home_bases, rules, cost_model)
    instance = AcpInstance(legs, pairings, frozenset(home_bases), rules,
                           cost_model)

    covered = {leg for p in pairings for leg in p.legs}
    uncovered = [leg.id for leg in legs if leg not in covered]
    if uncovered:
        LOGGER.warning(f'No pairing covers legs {", ".join(uncovered)}; '
                       'the instance has no exact cover.')
    return instance


def _parse_leg(row: Dict[str, Any],
               line: Optional[int] = None,
               prefix: str = '') -> FlightLeg:
    values = {}
    for column in LEG_COLUMNS:
        value = row.get(column)
        if value is None or str(value).strip() == '':
            raise ParseError('missing value', line=line, field=prefix + column)
        values[column] = str(value).strip()

    dep = io.str_to_datetime(values['departure_time'],
                             line=line,
                             field=prefix + 'departure_time')
    arr = io.str_to_datetime(values['arrival_time'],
                             line=line,
                             field=prefix + 'arrival_time')
    if not arr > dep:
        raise ParseError('arrival must be after departure',
                         line=line,
                         field=prefix + 'arrival_time')
    return FlightLeg(values['id'],
                     values['departure_airport'],
                     values['arrival_airport'],
                     dep,
                     arr)


def read_legs_csv(path: Union[str, Path]) -> Tuple[List[FlightLeg], List[str]]:
    """Read a comma-separated leg schedule.

    The first non-comment line is the header naming the five leg columns.
    A comment line `# home-bases: A B` declares the home bases.

    Raises:
        vqaopt.exceptions.ParseError: With the offending line and column.
    """
    legs: List[FlightLeg] = []
    bases: List[str] = []
    header: Optional[List[str]] = None
    with open(path, newline='', encoding='utf-8') as f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            if not row or not ''.join(row).strip():
                continue
            first = row[0].strip()
            if first.startswith('#'):
                comment = ','.join(row).lstrip('#').strip()
                if comment.lower().startswith(HOME_BASES_DIRECTIVE):
                    rest = comment[len(HOME_BASES_DIRECTIVE):]
                    bases.extend(rest.replace(',', ' ').split())
                continue
            if header is None:
                header = [c.strip() for c in row]
                missing = [c for c in LEG_COLUMNS if c not in header]
                if missing:
                    raise ParseError(f'header lacks columns {missing}',
                                     line=lineno)
                continue
            if len(row) != len(header):
                raise ParseError(f'expected {len(header)} columns, got '
                                 f'{len(row)}',
                                 line=lineno)
            legs.append(_parse_leg(dict(zip(header, row)), line=lineno))

    if header is None:
        raise ParseError('schedule has no header line')
    _check_unique(legs)
    return legs, bases


def _check_unique(legs: Sequence[FlightLeg]):
    seen = set()
    for leg in legs:
        if leg.id in seen:
            raise ParseError(f'duplicate leg id {leg.id!r}', field='id')
        seen.add(leg.id)


def instance_from_dict(data: dict,
                       rules: Optional[RuleConfig] = None,
                       cost_model: Optional[CostModel] = None,
                       home_bases: Optional[Iterable[str]] = None
                       ) -> AcpInstance:
    """Rebuild an instance saved with `AcpInstance.to_dict`.

    Explicit arguments take precedence over values stored in `data`.

    Raises:
        vqaopt.exceptions.ParseError: With the offending field.
    """
    if not isinstance(data, dict) or not isinstance(data.get('legs'), list):
        raise ParseError('expected an object with a "legs" list',
                         field='legs')
    legs = []
    for i, row in enumerate(data['legs']):
        if not isinstance(row, dict):
            raise ParseError('expected an object', field=f'legs.{i}')
        legs.append(_parse_leg(row, prefix=f'legs.{i}.'))
    _check_unique(legs)

    try:
        rules = rules or RuleConfig.from_dict(data.get('rules'))
        cost_model = cost_model or CostModel.from_dict(data.get('cost'))
    except (ConfigError, TypeError) as e:
        raise ParseError(str(e), field='rules')
    bases = list(home_bases or data.get('home_bases') or [])
    return build_instance(legs, bases, rules, cost_model)


def load_acp_instance(source: Union[str, Path, int],
                      rules: Optional[RuleConfig] = None,
                      cost_model: Optional[CostModel] = None,
                      home_bases: Optional[Iterable[str]] = None,
                      **generator_options) -> ProblemInstance:
    """Load a schedule file (.csv or .json) or generate one from a seed.

    Returns:
        Problem instance whose "acp" form is an `AcpInstance`.

    Raises:
        vqaopt.exceptions.ParseError: If the file cannot be parsed.
    """
    if isinstance(source, int) and not isinstance(source, bool):
        legs, bases = generate_schedule(source, **generator_options)
        acp = build_instance(legs, home_bases or bases, rules, cost_model)
        name = f'acp-seed{source}'
    else:
        path = Path(source)
        try:
            if path.suffix.lower() == '.json':
                try:
                    data = json.loads(path.read_text(encoding='utf-8'))
                except json.JSONDecodeError as e:
                    raise ParseError(e.msg, line=e.lineno)
                acp = instance_from_dict(data, rules, cost_model, home_bases)
            else:
                legs, bases = read_legs_csv(path)
                acp = build_instance(legs, home_bases or bases, rules,
                                     cost_model)
        except FileNotFoundError:
            raise ParseError(f'{path} does not exist')
        name = path.stem

    if not acp.home_bases:
        LOGGER.warning(f'{name}: no home bases given, no pairings exist.')
    LOGGER.info(f'Loaded {name}: {len(acp.legs)} legs, '
                f'{len(acp.pairings)} pairings.')
    return ProblemInstance(name,
                           'acp',
                           acp,
                           metadata={
                               'legs': len(acp.legs),
                               'pairings': len(acp.pairings)
                           })


def save_instance(instance: AcpInstance, path: Union[str, Path]):
    """Write a self-contained JSON file reloadable by `load_acp_instance`."""
    io.write_json(path, instance.to_dict())


def generate_schedule(seed: int,
                      bases: int = 2,
                      outstations: int = 3,
                      days: int = 2,
                      trips_per_day: int = 2,
                      overnight_probability: float = 0.3,
                      start: date = date(2024, 3, 4)
                      ) -> Tuple[List[FlightLeg], List[str]]:
    """Random schedule of round trips out of home bases.

    Each trip flies from a base to an outstation and back, either later the
    same day or the next morning. Same seed, same schedule.

    Returns:
        The legs and the home-base codes.
    """
    if min(bases, outstations, days, trips_per_day) < 1:
        raise ConfigError('Generator sizes must be positive.')
    rng = np.random.default_rng(seed)
    base_codes = [f'B{i}' for i in range(bases)]
    station_codes = [f'S{i}' for i in range(outstations)]

    legs: List[FlightLeg] = []

    def add(origin, dest, dep, block):
        leg_id = f'F{len(legs) + 1:03d}'
        legs.append(
            FlightLeg(leg_id, origin, dest, dep, dep + timedelta(minutes=block)))

    for d in range(days):
        day = datetime.combine(start + timedelta(days=d), time())
        for _ in range(trips_per_day):
            base = base_codes[int(rng.integers(bases))]
            station = station_codes[int(rng.integers(outstations))]
            block = int(rng.integers(6, 19)) * 10
            dep = day + timedelta(hours=int(rng.integers(6, 18)),
                                  minutes=int(rng.integers(0, 4)) * 15)
            add(base, station, dep, block)
            arrival = legs[-1].arrival_time
            if rng.random() < overnight_probability:
                back = datetime.combine(arrival.date() + timedelta(days=1),
                                        time(int(rng.integers(6, 10))))
            else:
                back = arrival + timedelta(minutes=int(rng.integers(4, 25)) *
                                           15)
            add(station, base, back, block)

    LOGGER.debug(f'Generated {len(legs)} legs with seed {seed}.')
    return legs, base_codes


def acp_to_mcec(instance: AcpInstance) -> McecInstance:
    """Legs become elements and pairings become subsets.

    Element i is `instance.legs[i]` and subset j is `instance.pairings[j]`.
    """
    index = {leg.id: i for i, leg in enumerate(instance.legs)}
    b = np.zeros((len(instance.legs), len(instance.pairings)), dtype=np.int8)
    for j, pairing in enumerate(instance.pairings):
        for leg_id in pairing.leg_ids:
            b[index[leg_id], j] = 1
    return McecInstance(b, [p.cost for p in instance.pairings],
                        tuple(index),
                        tuple(p.label for p in instance.pairings))


def decode_pairings(instance: AcpInstance, bitstring: str) -> List[Pairing]:
    """Pairings selected by a measured bitstring."""
    selection = selection_from_bitstring(bitstring)
    return [p for p, x in zip(instance.pairings, selection) if x]
