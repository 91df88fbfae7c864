#!/usr/bin/env python3
"""Writes datasets/bench108.jsonl and datasets/scenarios.jsonl.

Each case is a list of (robot, call) pairs. Goals are derived here from the
nominal call semantics on the threebot scene, not from the simulator, so the
harness oracle run is a real consistency check.
"""

import json
import math
import pathlib
import re

ROOT = pathlib.Path(__file__).resolve().parent.parent

START = {
    "youbot1": [0.0, 3.0, -90.0],
    "youbot2": [2.0, 3.0, -90.0],
    "youbot3": [-2.0, 3.0, -90.0],
}
PRESETS = {"fold": [0, -10, 140, 40, 0], "extend": [0, 55, 35, 50, 0]}
XY_TOL = 0.05
HEADING_TOL = 1.0
JOINT_TOL = 0.5
TIMEOUT = {"simple": 3000, "composite": 6000, "complex": 9000}


def norm(h):
    h = math.fmod(h + 180.0, 360.0)
    if h < 0:
        h += 360.0
    return h - 180.0


def num(v):
    s = f"{v:.6g}"
    return s if "." in s else s + ".0"


def call_text(name, *args):
    return f"{name}({', '.join(a if isinstance(a, str) else num(a) for a in args)})"


# ---- wording -----------------------------------------------------------------

def phrase(name, args):
    if name == "moveForward":
        d = args[0]
        return f"drive {'forward' if d >= 0 else 'backward'} {num(abs(d))} m"
    if name == "moveLateral":
        d = args[0]
        return f"slide {num(abs(d))} m toward {'+x' if d >= 0 else '-x'}"
    if name == "moveToX":
        return f"go to x = {num(args[0])}"
    if name == "moveToY":
        return f"go to y = {num(args[0])}"
    if name == "moveToXY":
        order = ""
        if len(args) > 2:
            order = " moving along x first" if args[2] == "xFirst" else " moving along y first"
        return f"go to ({num(args[0])}, {num(args[1])}){order}"
    if name == "moveToXWithRotation":
        return f"turn toward x = {num(args[0])} and drive there"
    if name == "rotateToBeta":
        return f"face {num(args[0])} degrees"
    if name == "moveArmSequential":
        return "set the arm joints to " + ", ".join(num(a) for a in args)
    return {
        "presetFold": "fold the arm",
        "presetExtend": "extend the arm",
        "openGripper": "open the gripper",
        "closeGripper": "close the gripper",
        "capturePhoto": "take a photo",
    }[name]


def join_phrases(ps):
    if len(ps) == 1:
        return ps[0]
    return ", then ".join(ps)


def instruction(steps):
    by_robot = {}
    for robot, (name, args) in steps:
        by_robot.setdefault(robot, []).append(phrase(name, args))
    parts = [f"{r}: {join_phrases(ps)}" for r, ps in by_robot.items()]
    text = "; ".join(parts)
    return text + "."


# ---- nominal outcome ---------------------------------------------------------------

def nominal(steps):
    state = {r: {"pose": list(p), "joints": None, "gripper": None, "photos": 0,
                 "moved": False, "rotated": False}
             for r, p in START.items()}
    for robot, (name, args) in steps:
        s = state[robot]
        x, y, h = s["pose"]
        if name == "moveForward":
            x += args[0] * math.cos(math.radians(h))
            y += args[0] * math.sin(math.radians(h))
        elif name == "moveLateral":
            x += args[0]
        elif name == "moveToX":
            x = args[0]
        elif name == "moveToY":
            y = args[0]
        elif name == "moveToXY":
            x, y = args[0], args[1]
        elif name == "moveToXWithRotation":
            h = 0.0 if args[0] >= x else -180.0
            x = args[0]
            s["rotated"] = True
        elif name == "rotateToBeta":
            h = args[0]
            s["rotated"] = True
        elif name == "moveArmSequential":
            s["joints"] = list(args)
        elif name == "presetFold":
            s["joints"] = PRESETS["fold"]
        elif name == "presetExtend":
            s["joints"] = PRESETS["extend"]
        elif name == "openGripper":
            s["gripper"] = "open"
        elif name == "closeGripper":
            s["gripper"] = "closed"
        elif name == "capturePhoto":
            s["photos"] += 1
        if name.startswith("move") and name != "moveArmSequential":
            s["moved"] = True
        s["pose"] = [x, y, norm(h)]
    return state


def derived_goals(steps):
    goals = []
    for robot, s in nominal(steps).items():
        if not any(r == robot for r, _ in steps):
            continue
        x, y, h = s["pose"]
        if s["moved"]:
            goals.append({"kind": "at_xy", "robot": robot, "x": round(x, 6), "y": round(y, 6),
                          "tol": XY_TOL})
        if s["rotated"]:
            goals.append({"kind": "heading_is", "robot": robot, "beta": h, "tol": HEADING_TOL})
        if s["photos"]:
            goals.append({"kind": "photos_at_least", "robot": robot, "n": s["photos"]})
        if s["joints"] is not None:
            preset = next((k for k, v in PRESETS.items() if v == s["joints"]), None)
            g = {"kind": "arm_at", "robot": robot, "tol": JOINT_TOL}
            if preset:
                g["preset"] = preset
            else:
                g["joints"] = s["joints"]
            goals.append(g)
        if s["gripper"] is not None:
            goals.append({"kind": "gripper_is", "robot": robot, "state": s["gripper"]})
    return goals


def script_text(steps):
    robots = []
    for r, _ in steps:
        if r not in robots:
            robots.append(r)
    sections = []
    for r in robots:
        calls = [call_text(n, *a) for rr, (n, a) in steps if rr == r]
        sections.append("\n".join([f"@robot {r}"] + calls) if len(robots) > 1 else "\n".join(calls))
    return "\n\n".join(sections), robots


# ---- case book -----------------------------------------------------------------------

def c(name, *args):
    return (name, list(args))


def solo(robot, *calls):
    return [(robot, call) for call in calls]


R1, R2, R3 = "youbot1", "youbot2", "youbot3"

PICK = [c("moveToY", 0.5), c("presetExtend"), c("closeGripper")]
HOLD_CUBE = [{"kind": "holding", "robot": R3, "object": "target_cube"}]
CUBE_PARKED = [{"kind": "in_region", "subject": "target_cube", "region": "parking_arm"}]
OBSTACLE_PARKED = [{"kind": "holding", "robot": R2, "object": "obstacle"},
                   {"kind": "in_region", "subject": "obstacle", "region": "parking_box"}]


def simple_cases():
    cases = []
    for y in [2.5, 2.0, 1.5, 1.0, 0.5, 0.0]:
        cases.append((solo(R1, c("moveToY", y)), []))
    for dx in [0.5, -0.5, 1.0, -1.0]:
        cases.append((solo(R2, c("moveLateral", dx)), []))
    for b in [0.0, 90.0, -135.0, 45.0]:
        cases.append((solo(R3, c("rotateToBeta", b)), []))
    cases.append((solo(R1, c("capturePhoto")), []))
    cases.append((solo(R1, c("capturePhoto"), c("capturePhoto")), []))
    cases.append((solo(R1, c("rotateToBeta", 0.0), c("capturePhoto")), []))
    cases.append((solo(R3, c("presetExtend")), []))
    cases.append((solo(R3, c("presetExtend"), c("presetFold")), []))
    cases.append((solo(R3, c("closeGripper")), []))
    cases.append((solo(R3, c("closeGripper"), c("openGripper")), []))
    for js in [[30, 20, 40, 10, 0], [-45, 0, 90, 30, 0], [90, 45, 45, 0, 10]]:
        cases.append((solo(R3, c("moveArmSequential", *map(float, js))), []))
    cases.append((solo(R1, c("moveForward", 1.0)), []))
    cases.append((solo(R2, c("moveForward", 0.5)), []))
    cases.append((solo(R3, c("moveForward", -0.5)), []))
    cases.append((solo(R1, c("moveForward", 2.0)), []))
    cases.append((solo(R1, c("moveToXY", 1.0, 2.0)), []))
    cases.append((solo(R2, c("moveToXY", 3.0, 2.0, "xFirst")), []))
    cases.append((solo(R3, c("moveToXY", -3.0, 2.5)), []))
    cases.append((solo(R1, c("moveToXY", -1.0, 1.5, "yFirst")), []))
    cases.append((solo(R2, c("moveToX", 1.0)), []))
    cases.append((solo(R3, c("moveToX", -1.0)), []))
    cases.append((solo(R3, c("moveToXWithRotation", -3.0)), []))
    cases.append((solo(R2, c("moveToY", 2.0), c("moveLateral", 0.5)), []))
    return cases


def composite_cases():
    cases = []
    for y1, dx in [(1.5, -1.0), (1.5, 1.0), (1.0, -0.5), (1.0, 0.5), (2.0, 1.5), (0.5, -1.5)]:
        cases.append((solo(R1, c("moveToY", y1), c("capturePhoto"), c("moveLateral", dx),
                           c("capturePhoto")), []))
    cases.append((solo(R3, *PICK), HOLD_CUBE))
    cases.append((solo(R3, c("moveToXY", -2.0, 0.5), c("presetExtend"), c("closeGripper")), HOLD_CUBE))
    cases.append((solo(R3, *PICK, c("presetFold")), HOLD_CUBE))
    cases.append((solo(R3, *PICK, c("moveToY", 1.5)), HOLD_CUBE))
    cases.append((solo(R2, c("moveToY", 1.6), c("moveToXY", 2.6, -0.5, "xFirst"),
                       c("moveLateral", 0.8)), OBSTACLE_PARKED))
    cases.append((solo(R2, c("moveToX", 2.6), c("moveToY", -0.4), c("moveLateral", 0.8)),
                  OBSTACLE_PARKED))
    cases.append((solo(R2, c("moveLateral", 0.6), c("moveToY", -0.4), c("moveLateral", 0.8)),
                  OBSTACLE_PARKED))
    cases.append((solo(R2, c("moveToX", 2.6), c("moveToY", -0.4), c("moveToX", 3.4)),
                  OBSTACLE_PARKED))
    for b1, b2 in [(0.0, -180.0), (-45.0, -135.0), (45.0, 135.0), (30.0, -30.0)]:
        cases.append((solo(R1, c("rotateToBeta", b1), c("capturePhoto"), c("rotateToBeta", b2),
                           c("capturePhoto")), []))
    cases.append(([(R1, c("moveToY", 1.5)), (R2, c("moveToY", 2.0)), (R3, c("moveToY", 2.0))], []))
    cases.append(([(R1, c("capturePhoto")), (R2, c("moveLateral", 0.5)), (R3, c("presetExtend"))], []))
    cases.append(([(R1, c("moveToY", 2.0)), (R1, c("capturePhoto")), (R3, c("presetExtend")),
                   (R3, c("presetFold"))], []))
    cases.append(([(R2, c("moveToX", 3.0)), (R3, c("moveToX", -3.0)), (R1, c("capturePhoto"))], []))
    for a, b in [([30, 20, 40, 10, 0], [0, 55, 35, 50, 0]),
                 ([-30, 10, 60, 20, 0], [45, 30, 30, 30, 20]),
                 ([60, 0, 100, 30, -20], [-60, 20, 80, 10, 20]),
                 ([0, 40, 40, 40, 0], [0, -10, 140, 40, 0])]:
        cases.append((solo(R3, c("moveArmSequential", *map(float, a)), c("closeGripper"),
                           c("moveArmSequential", *map(float, b))), []))
    cases.append((solo(R2, c("moveToY", 2.0), c("moveToX", 1.0), c("rotateToBeta", 0.0)), []))
    cases.append((solo(R2, c("moveLateral", -1.0), c("moveForward", 1.0), c("rotateToBeta", -180.0)), []))
    cases.append((solo(R2, c("moveToXY", 1.5, 2.5), c("rotateToBeta", 90.0), c("moveForward", 0.5)), []))
    cases.append((solo(R2, c("rotateToBeta", 0.0), c("moveForward", 1.0), c("moveLateral", -0.5)), []))
    for y, x in [(2.0, 1.5), (2.0, -1.5), (1.0, 2.0), (1.0, -2.0)]:
        cases.append((solo(R1, c("moveToY", y), c("moveToXWithRotation", x), c("capturePhoto")), []))
    cases.append((solo(R3, c("moveToY", 2.0), c("moveToXWithRotation", -3.0), c("presetExtend")), []))
    cases.append((solo(R3, c("rotateToBeta", 0.0), c("moveForward", 1.0), c("presetExtend"),
                       c("closeGripper")), []))
    return cases


def complex_cases():
    cases = []
    cases.append((solo(R3, c("moveToY", 0.5), c("presetFold"), c("presetExtend"), c("closeGripper"),
                       c("moveToY", 2.0), c("moveToXWithRotation", -3.2)), HOLD_CUBE + CUBE_PARKED))
    cases.append((solo(R3, *PICK, c("moveToY", 2.0), c("moveToXWithRotation", -3.2)),
                  HOLD_CUBE + CUBE_PARKED))
    cases.append((solo(R3, *PICK, c("presetFold"), c("moveToY", 2.0), c("moveToXWithRotation", -3.4)),
                  HOLD_CUBE + CUBE_PARKED))
    cases.append((solo(R3, *PICK, c("moveToXY", -3.4, 2.0), c("presetFold"), c("openGripper")),
                  CUBE_PARKED))
    cases.append((solo(R1, c("moveToY", 1.5), c("capturePhoto"), c("moveLateral", -1.0),
                       c("capturePhoto"), c("moveLateral", 2.0), c("capturePhoto")), []))
    cases.append((solo(R1, c("capturePhoto"), c("moveToY", 1.5), c("capturePhoto"), c("moveToY", 0.5),
                       c("capturePhoto")), []))
    for angles in [(-45.0, -90.0, -135.0), (0.0, -90.0, -180.0), (-30.0, -60.0, -120.0),
                   (45.0, 90.0, 135.0)]:
        steps = []
        for a in angles:
            steps += [c("rotateToBeta", a), c("capturePhoto")]
        cases.append((solo(R1, *steps), []))
    cases.append((solo(R2, c("moveToX", 2.6), c("moveToY", 1.6), c("moveToY", -0.4),
                       c("moveLateral", 0.8), c("rotateToBeta", -45.0)), OBSTACLE_PARKED))
    cases.append((solo(R2, c("moveLateral", 0.6), c("moveForward", 1.0), c("moveForward", 1.4),
                       c("moveToY", -0.4), c("moveLateral", 0.8)), OBSTACLE_PARKED))
    cases.append((solo(R2, c("moveToY", 2.0), c("moveLateral", 0.6), c("moveToY", -0.4),
                       c("moveToX", 3.4), c("moveForward", 0.1)), OBSTACLE_PARKED))
    cases.append((solo(R2, c("moveToXY", 2.6, 1.6, "xFirst"), c("moveToY", -0.4), c("moveLateral", 0.5),
                       c("moveLateral", 0.3), c("moveForward", -0.1)), OBSTACLE_PARKED))
    cases.append(([(R1, c("moveToY", 1.5)), (R1, c("capturePhoto")), (R2, c("moveToY", 1.6)),
                   (R2, c("moveToXY", 2.6, -0.5, "xFirst")), (R2, c("moveLateral", 0.8))],
                  OBSTACLE_PARKED))
    cases.append(([(R3, x) for x in PICK] + [(R1, c("moveToY", 2.0)), (R1, c("capturePhoto")),
                                             (R1, c("moveLateral", 1.0))], HOLD_CUBE))
    cases.append(([(R1, c("capturePhoto")), (R1, c("moveToY", 1.0)), (R1, c("capturePhoto")),
                   (R3, c("rotateToBeta", 0.0)), (R3, c("presetExtend")), (R3, c("closeGripper"))], []))
    cases.append(([(R2, c("moveToX", 3.0)), (R2, c("moveToY", 2.0)), (R3, c("moveToX", -3.0)),
                   (R3, c("moveToY", 2.0)), (R1, c("moveToY", 2.0)), (R1, c("capturePhoto"))], []))
    cases.append(([(R1, c("moveToXY", 1.0, 2.0)), (R1, c("capturePhoto")), (R2, c("moveLateral", 1.0)),
                   (R2, c("moveForward", 0.5)), (R3, c("presetExtend"))], []))
    cases.append(([(R3, x) for x in PICK] + [(R3, c("moveToY", 2.0)), (R2, c("moveToY", 2.0)),
                                             (R2, c("moveLateral", 0.5))], HOLD_CUBE))
    for a, b in [([30, 20, 40, 10, 0], [-30, 40, 20, 30, 0]),
                 ([0, 55, 35, 50, 0], [45, 10, 90, 20, 30]),
                 ([-90, 30, 60, 0, 0], [90, 30, 60, 0, 0]),
                 ([20, 60, 20, 40, -30], [-20, 0, 120, 10, 30])]:
        cases.append((solo(R3, c("moveArmSequential", *map(float, a)), c("closeGripper"),
                           c("moveArmSequential", *map(float, b)), c("openGripper"), c("presetFold")), []))
    cases.append((solo(R3, c("rotateToBeta", 90.0), c("moveForward", 0.5), c("presetExtend"),
                       c("presetFold"), c("rotateToBeta", -90.0)), []))
    cases.append((solo(R3, c("moveToX", -3.0), c("rotateToBeta", 0.0), c("presetExtend"),
                       c("closeGripper"), c("openGripper"), c("presetFold")), []))
    for route in [
        [c("moveToY", 2.5), c("moveToX", 1.0), c("rotateToBeta", 0.0), c("moveForward", 0.5),
         c("moveLateral", -0.5)],
        [c("moveLateral", -1.5), c("moveToY", 2.0), c("rotateToBeta", 90.0), c("moveForward", 0.5),
         c("moveToX", 1.0)],
        [c("rotateToBeta", -180.0), c("moveForward", 1.0), c("moveToY", 2.2), c("rotateToBeta", -90.0),
         c("moveForward", 0.2), c("moveLateral", 0.5)],
        [c("moveToXY", 1.0, 2.5, "xFirst"), c("moveToXY", 1.5, 2.0), c("rotateToBeta", 45.0),
         c("moveForward", 0.5), c("rotateToBeta", 0.0)],
    ]:
        cases.append((solo(R2, *route), []))
    for y, x1, x2 in [(2.0, 1.5, -1.5), (1.0, -1.0, 1.0), (2.5, 2.0, 0.5), (1.5, -2.0, -0.5)]:
        cases.append((solo(R1, c("moveToY", y), c("moveToXWithRotation", x1), c("capturePhoto"),
                           c("moveToXWithRotation", x2), c("capturePhoto")), []))
    cases.append((solo(R1, c("moveLateral", -1.0), c("capturePhoto"), c("moveLateral", 2.0),
                       c("capturePhoto"), c("moveToXY", 0.0, 3.0, "xFirst")), []))
    cases.append((solo(R1, c("moveToY", 1.5), c("capturePhoto"), c("moveToY", 0.5), c("capturePhoto"),
                       c("moveToXY", 0.0, 3.0)), []))
    return cases


def build(tier, prefix, book):
    records = []
    for i, (steps, extra) in enumerate(book, start=1):
        text, robots = script_text(steps)
        records.append({
            "id": f"{prefix}-{i:02d}",
            "tier": tier,
            "instruction": instruction(steps),
            "robots": robots,
            "oracle_script": text,
            "goals": derived_goals(steps) + extra,
            "timeout_ticks": TIMEOUT[tier],
        })
    return records


def golden_record():
    text = (ROOT / "scenes" / "golden_all_robots.txt").read_text().strip()
    return {
        "id": "golden-all-robots",
        "instruction": "all robots start action",
        "robots": ["youbot1", "youbot2", "youbot3"],
        "oracle_script": text,
        "goals": [
            {"kind": "photos_at_least", "robot": R1, "n": 4},
            {"kind": "at_xy", "robot": R1, "x": 0.0, "y": 3.0, "tol": XY_TOL},
            *OBSTACLE_PARKED,
            *HOLD_CUBE,
            *CUBE_PARKED,
            {"kind": "heading_is", "robot": R3, "beta": -180.0, "tol": HEADING_TOL},
        ],
        "timeout_ticks": 40000,
    }


def main():
    records = (build("simple", "simp", simple_cases())
               + build("composite", "comp", composite_cases())
               + build("complex", "cplx", complex_cases()))
    counts = {t: sum(r["tier"] == t for r in records) for t in TIMEOUT}
    assert counts == {"simple": 36, "composite": 36, "complex": 36}, counts
    instructions = [r["instruction"] for r in records]
    assert len(set(instructions)) == len(instructions), "duplicate instruction"
    for r in records:
        n = len([l for l in r["oracle_script"].splitlines() if re.match(r"^\w+\(", l)])
        lo, hi = {"simple": (1, 2), "composite": (3, 4), "complex": (5, 6)}[r["tier"]]
        assert lo <= n <= hi, (r["id"], n)

    out = ROOT / "datasets"
    out.mkdir(exist_ok=True)
    with open(out / "bench108.jsonl", "w") as f:
        for r in records:
            f.write(json.dumps(r) + "\n")
    with open(out / "scenarios.jsonl", "w") as f:
        f.write(json.dumps(golden_record()) + "\n")
    print(f"wrote {len(records)} cases: {counts}")


if __name__ == "__main__":
    main()
