import random

import pytest
from hypothesis import given, strategies as st

from _gen import random_lift, random_plmap
from homeolab.circle_dynamics import CircleLift
from homeolab.formats import emit_map, map_from_obj, parse_map
from homeolab.pl_core import DomainError, LiftError, MalformedMapError, MonotonicityError, PLMap
from homeolab.rational import rat

seeds = st.integers(0, 2**32 - 1)


@given(seeds)
def test_round_trip(seed):
    rng = random.Random(seed)
    f = random_plmap(rng, rng.randint(1, 8))
    F = random_lift(rng, rng.randint(1, 8))
    assert parse_map(emit_map(f)) == f
    assert parse_map(emit_map(F)) == F
    assert emit_map(parse_map(emit_map(f))) == emit_map(f)


def test_emission_is_canonical():
    f = PLMap([0, rat(1, 2), 1], [0, rat(2, 3), 1])
    assert emit_map(f) == '{"breakpoints":[["0/1","0/1"],["1/2","2/3"],["1/1","1/1"]],"kind":"interval"}'
    assert parse_map('{"kind":"interval","breakpoints":[["0","0"],["2/4","4/6"],["1","1"]]}') == f


@pytest.mark.parametrize("text,err", [
    ("not json", MalformedMapError),
    ("[]", MalformedMapError),
    ('{"kind":"torus","breakpoints":[]}', MalformedMapError),
    ('{"kind":"interval"}', MalformedMapError),
    ('{"kind":"interval","breakpoints":[["0"],["1","1"]]}', MalformedMapError),
    ('{"kind":"interval","breakpoints":[["0","0"],["1","1.0"]]}', MalformedMapError),
    ('{"kind":"interval","breakpoints":[["0","0"],["1",1.0]]}', MalformedMapError),
    ('{"kind":"interval","breakpoints":[["0","0"],["1","1/0"]]}', MalformedMapError),
    ('{"kind":"interval","breakpoints":[["0","0"],["1/2","1/2"],["1/3","1"],["1","1"]]}', MonotonicityError),
    ('{"kind":"interval","breakpoints":[["0","0"],["1/3","2/3"],["1/2","1/2"],["1","1"]]}', MonotonicityError),
    ('{"kind":"interval","breakpoints":[["0","1/4"],["1","1"]]}', DomainError),
    ('{"kind":"lift","breakpoints":[["0","1/4"],["1","3/2"]]}', LiftError),
    ('{"kind":"lift","breakpoints":[["0","5/4"],["1","9/4"]]}', DomainError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_map(text)


def test_expected_kind():
    text = emit_map(CircleLift([0, 1], [rat(1, 3), rat(4, 3)]))
    assert isinstance(parse_map(text, "lift"), CircleLift)
    with pytest.raises(MalformedMapError):
        parse_map(text, "interval")
    with pytest.raises(MalformedMapError):
        map_from_obj({"kind": "lift", "breakpoints": [[True, "0"], ["1", "1"]]})
