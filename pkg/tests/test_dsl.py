import random

import pytest

from gigplan.dsl import ParseError, parse_domain, parse_task, render_domain, render_task

MINIMAL = """
; smallest well-formed domain
(domain mini
  (:types item station)
  (:predicates (cuttable item) (cut item) (at item station))
  (:action cut :params (?i - item ?s - station)
    :pre ((cuttable ?i) (at ?i ?s))
    :eff ((cut ?i))))
"""

ASYNC = """
(domain pots
  (:types item)
  (:predicates (raw item) (boiled item))
  (:action boil :params (?x - item)
    :pre ((raw ?x))
    :eff ((not (raw ?x)))
    :duration 3 :delayed ((boiled ?x))))
"""

STACKING_TASK = """
(task snack :objects (robot1 - robot table1 - surface bread1 - surface bread2 - surface cheese1 - surface)
  :init ((on bread1 table1))
  :goal ((on cheese1 bread1) (on bread2 cheese1))
  :horizon 4)
"""

STACK_DOMAIN = """
(domain stacker
  (:types robot surface)
  (:predicates (on surface surface))
  (:action noop :params (?r - robot) :pre () :eff ()))
"""


def test_minimal_domain():
    spec = parse_domain(MINIMAL)
    assert spec.name == "mini"
    assert len(spec.actions) == 1
    assert spec.actions[0].duration == 0
    assert spec.actions[0].delayed_add == ()


def test_delayed_effects_parse():
    spec = parse_domain(ASYNC)
    boil = spec.action_map()["boil"]
    assert boil.duration == 3
    assert boil.delayed_add == (boil.delayed_add[0],)
    assert boil.delayed_add[0].name == "boiled"


def test_undeclared_predicate_reports_position():
    bad = MINIMAL.replace("(cut ?i)", "(fried ?i)")
    with pytest.raises(ParseError) as exc:
        parse_domain(bad)
    diag = exc.value.diagnostics[0]
    assert "fried" in diag.message
    assert diag.line > 0 and diag.col > 0


def test_duplicate_action_name_rejected():
    dup = MINIMAL.rstrip()[:-1] + """
  (:action cut :params (?i - item ?s - station)
    :pre ((cuttable ?i)) :eff ((cut ?i))))
"""
    with pytest.raises(ParseError) as exc:
        parse_domain(dup)
    assert any("duplicate action" in d.message for d in exc.value.diagnostics)


def test_duration_zero_with_delayed_rejected():
    bad = ASYNC.replace(":duration 3", ":duration 0")
    with pytest.raises(ParseError) as exc:
        parse_domain(bad)
    assert any("duration 0" in d.message for d in exc.value.diagnostics)


def test_task_two_conjunct_goal():
    dom = parse_domain(STACK_DOMAIN)
    task = parse_task(STACKING_TASK, dom)
    assert len(task.goal) == 2
    assert ("on", "cheese1", "bread1") in task.goal


def test_empty_goal_rejected():
    dom = parse_domain(STACK_DOMAIN)
    bad = STACKING_TASK.replace("((on cheese1 bread1) (on bread2 cheese1))", "()")
    with pytest.raises(ParseError) as exc:
        parse_task(bad, dom)
    assert any("empty goal" in d.message for d in exc.value.diagnostics)


def test_undeclared_object_type_rejected():
    dom = parse_domain(STACK_DOMAIN)
    bad = STACKING_TASK.replace("robot1 - robot", "drone1 - drone")
    with pytest.raises(ParseError) as exc:
        parse_task(bad, dom)
    assert any("drone" in d.message for d in exc.value.diagnostics)


def test_negative_goal_rejected():
    dom = parse_domain(STACK_DOMAIN)
    bad = STACKING_TASK.replace("(on bread2 cheese1)", "(not (on bread2 cheese1))")
    with pytest.raises(ParseError) as exc:
        parse_task(bad, dom)
    assert any("negative literal" in d.message for d in exc.value.diagnostics)


def test_domain_round_trip():
    for source in (MINIMAL, ASYNC):
        spec = parse_domain(source)
        again = parse_domain(render_domain(spec))
        assert again == spec


def test_task_round_trip():
    dom = parse_domain(STACK_DOMAIN)
    task = parse_task(STACKING_TASK, dom)
    assert parse_task(render_task(task), dom) == task


def test_single_token_corruption_reports_within_line():
    # replace one token with a character outside the grammar; the diagnostic
    # must land on the corrupted line
    rng = random.Random(7)
    source = MINIMAL
    lines = source.split("\n")
    for _ in range(25):
        line_no = rng.randrange(len(lines))
        line = lines[line_no]
        tokens = [i for i, ch in enumerate(line) if ch.isalnum()]
        if not tokens or line.lstrip().startswith(";"):
            continue
        pos = rng.choice(tokens)
        corrupted = lines.copy()
        corrupted[line_no] = line[:pos] + "%" + line[pos + 1:]
        with pytest.raises(ParseError) as exc:
            parse_domain("\n".join(corrupted))
        assert any(d.line == line_no + 1 for d in exc.value.diagnostics)
