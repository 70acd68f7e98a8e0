#!/usr/bin/env python3
"""Writes models/welding-cell.cb, the bundled controller behaviour.

A robot and a human operator share a welding cell. Three risk factors are
tracked: HS (operator close to the robot), HC (contact with the robot) and
HRW (operator in the weld zone). Each factor is raised when its sensor
fires, mitigated on the next step, and reset once the sensor is quiet.
"""
import itertools
import json
import pathlib
import sys

FACTORS = ["HS", "HC", "HRW"]
PHASES = ["0", "a", "m"]

# Sensor-on / sensor-off guard per factor.
SENSOR = {
    "HS": ("dist < 2", "dist >= 2"),
    "HC": ("hc = 1", "hc = 0"),
    "HRW": ("hrw = 1", "hrw = 0"),
}


def step(phase, on):
    if phase == "0":
        return "a" if on else "0"
    if phase == "a":
        return "m"
    return "m" if on else "0"


def output_of(r):
    hs, hc, hrw = (r[f] for f in FACTORS)
    if hc != "0":
        robot = "stop"
    elif hs != "0" or hrw == "a":
        robot = "slow"
    else:
        robot = "normal"
    welder = "off" if hrw != "0" or hc == "a" else "on"
    alarm = 1 if "a" in (hs, hc, hrw) else 0
    return {"alarm": alarm, "robot": robot, "welder": welder}


def transitions():
    out = []
    for phases in itertools.product(PHASES, repeat=len(FACTORS)):
        src = dict(zip(FACTORS, phases))
        relevant = [f for f in FACTORS if src[f] != "a"]
        for bits in itertools.product([True, False], repeat=len(relevant)):
            on = dict(zip(relevant, bits))
            dst = {f: step(src[f], on.get(f, False)) for f in FACTORS}
            lits = [SENSOR[f][0 if on[f] else 1] for f in relevant]
            guard = " and ".join(lits) if lits else "true"
            out.append({"source": src, "guard": guard, "output": output_of(dst), "target": dst})
    return out


def main():
    doc = {
        "vars": [
            {"name": "dist", "sort": {"range": [0, 3]}, "kind": "monitored"},
            {"name": "hc", "sort": {"enum": ["0", "1"]}, "kind": "monitored"},
            {"name": "hrw", "sort": {"range": [0, 1]}, "kind": "monitored"},
            {"name": "robot", "sort": {"enum": ["normal", "slow", "stop"]}, "kind": "controlled"},
            {"name": "welder", "sort": {"enum": ["on", "off"]}, "kind": "controlled"},
            {"name": "alarm", "sort": {"range": [0, 1]}, "kind": "controlled"},
        ] + [{"name": f, "sort": "phase", "kind": "factor"} for f in FACTORS],
        "initial": {f: "0" for f in FACTORS},
        "transitions": transitions(),
    }
    root = pathlib.Path(__file__).resolve().parent.parent
    path = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else root / "models" / "welding-cell.cb"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
