#!/usr/bin/env python3
"""Writes the benchmark spec files under benchmarks/.

One JSON file per benchmark.  Re-running overwrites in place; the C++ loader
treats the directory as the source of truth.
"""

import json
import os
import re

BASE1 = ["add", "sub", "mul", "div", "sin", "cos", "exp", "log", "x"]
BASE2 = BASE1 + ["y"]
JIN = ["add", "sub", "mul", "div", "sin", "cos", "exp",
       "square", "cube", "x", "y", "const"]
NEAT_ONE = BASE1 + ["1"]
NEAT6 = ["add", "mul", "div", "inv", "neg", "sqrt", "x"]
NEAT7 = ["add", "sub", "mul", "div", "sin", "cos", "exp", "log",
         "tan", "tanh", "square", "cube", "sqrt", "x", "y"]
NEAT8 = ["add", "sub", "mul", "div", "exp", "expneg", "square", "x", "y"]


def U(lo, hi, n):
    return {"kind": "U", "lo": lo, "hi": hi, "count": n}


def E(lo, hi, n):
    return {"kind": "E", "lo": lo, "hi": hi, "count": n}


def poly(max_deg):
    return " + ".join(f"x^{d}" for d in range(max_deg, 1, -1)) + " + x"


SPECS = [
    ("Nguyen-1", poly(3), BASE1, U(-1, 1, 20), None),
    ("Nguyen-2", poly(4), BASE1, U(-1, 1, 20), None),
    ("Nguyen-3", poly(5), BASE1, U(-1, 1, 20), None),
    ("Nguyen-4", poly(6), BASE1, U(-1, 1, 20), None),
    ("Nguyen-5", "sin(x^2) * cos(x) - 1", BASE1, U(-1, 1, 20), None),
    ("Nguyen-6", "sin(x) + sin(x + x^2)", BASE1, U(-1, 1, 20), None),
    ("Nguyen-7", "log(x + 1) + log(x^2 + 1)", BASE1, U(0, 2, 20), None),
    ("Nguyen-8", "sqrt(x)", BASE1, U(0, 4, 20), None),
    ("Nguyen-9", "sin(x) + sin(y^2)", BASE2, U(0, 1, 20), None),
    ("Nguyen-10", "2 * sin(x) * cos(y)", BASE2, U(0, 1, 20), None),
    ("Nguyen-11", "x^y", BASE2, U(0, 1, 20), None),
    ("Nguyen-12", "x^4 - x^3 + 0.5 * y^2 - y", BASE2, U(0, 1, 20), None),
    ("Nguyen-12*", "x^4 - x^3 + 0.5 * y^2 - y", BASE2, U(0, 10, 20), None),
    ("R-1", "(x + 1)^3 / (x^2 - x + 1)", BASE1, E(-1, 1, 20), None),
    ("R-2", "(x^5 - 3 * x^3 + 1) / (x^2 + 1)", BASE1, E(-1, 1, 20), None),
    ("R-3", "(x^6 + x^5) / (x^4 + x^3 + x^2 + x + 1)", BASE1,
     E(-1, 1, 20), None),
    ("R-1*", "(x + 1)^3 / (x^2 - x + 1)", BASE1, E(-10, 10, 20), None),
    ("R-2*", "(x^5 - 3 * x^3 + 1) / (x^2 + 1)", BASE1, E(-10, 10, 20), None),
    ("R-3*", "(x^6 + x^5) / (x^4 + x^3 + x^2 + x + 1)", BASE1,
     E(-10, 10, 20), None),
    ("Livermore-1", "1/3 + x + sin(x^2)", BASE1, U(-10, 10, 1000), None),
    ("Livermore-2", "sin(x^2) * cos(x) - 2", BASE1, U(-1, 1, 20), None),
    ("Livermore-3", "sin(x^3) * cos(x^2) - 1", BASE1, U(-1, 1, 20), None),
    ("Livermore-4", "log(x + 1) + log(x^2 + 1) + log(x)", BASE1,
     U(0, 2, 20), None),
    ("Livermore-5", "x^4 - x^3 + x^2 - y", BASE2, U(0, 1, 20), None),
    ("Livermore-6", "4*x^4 + 3*x^3 + 2*x^2 + x", BASE1, U(-1, 1, 20), None),
    ("Livermore-7", "sinh(x)", BASE1, U(-1, 1, 20), None),
    ("Livermore-8", "cosh(x)", BASE1, U(-1, 1, 20), None),
    ("Livermore-9", poly(9), BASE1, U(-1, 1, 20), None),
    ("Livermore-10", "6 * sin(x) * cos(y)", BASE2, U(0, 1, 20), None),
    ("Livermore-11", "(x^2 * x^2) / (x + y)", BASE2, U(-1, 1, 50), None),
    ("Livermore-12", "x^5 / y^3", BASE2, U(-1, 1, 50), None),
    ("Livermore-13", "x^(1/3)", BASE1, U(0, 4, 20), None),
    ("Livermore-14", "x^3 + x^2 + x + sin(x) + sin(x^2)", BASE1,
     U(-1, 1, 20), None),
    ("Livermore-15", "x^(1/5)", BASE1, U(0, 4, 20), None),
    ("Livermore-16", "x^(2/5)", BASE1, U(0, 4, 20), None),
    ("Livermore-17", "4 * sin(x) * cos(y)", BASE2, U(0, 1, 20), None),
    ("Livermore-18", "sin(x^2) * cos(x) - 5", BASE1, U(-1, 1, 20), None),
    ("Livermore-19", "x^5 + x^4 + x^2 + x", BASE1, U(-1, 1, 20), None),
    ("Livermore-20", "exp(-x^2)", BASE1, U(-1, 1, 20), None),
    ("Livermore-21", poly(8), BASE1, U(-1, 1, 20), None),
    ("Livermore-22", "exp(-0.5 * x^2)", BASE1, U(-1, 1, 20), None),
    ("Jin-1", "2.5 * x^4 - 1.3 * x^3 + 0.5 * y^2 - 1.7 * y", JIN,
     U(-3, 3, 100), U(-3, 3, 30)),
    ("Jin-2", "8.0 * x^2 + 8.0 * y^3 - 15.0", JIN,
     U(-3, 3, 100), U(-3, 3, 30)),
    ("Jin-3", "0.2 * x^3 + 0.5 * y^3 - 1.2 * y - 0.5 * x", JIN,
     U(-3, 3, 100), U(-3, 3, 30)),
    ("Jin-4", "1.5 * exp(x) + 5.0 * cos(y)", JIN,
     U(-3, 3, 100), U(-3, 3, 30)),
    ("Jin-5", "6.0 * sin(x) * cos(y)", JIN, U(-3, 3, 100), U(-3, 3, 30)),
    ("Jin-6", "1.35 * x * y + 5.5 * sin((x - 1.0) * (y - 1.0))", JIN,
     U(-3, 3, 100), U(-3, 3, 30)),
    ("Neat-1", "x^4 + x^3 + x^2 + x", NEAT_ONE, U(-1, 1, 20), None),
    ("Neat-2", poly(5), NEAT_ONE, U(-1, 1, 20), None),
    ("Neat-3", "sin(x^2) * cos(x) - 1", NEAT_ONE, U(-1, 1, 20), None),
    ("Neat-4", "log(x + 1) + log(x^2 + 1)", NEAT_ONE, U(0, 2, 20), None),
    ("Neat-5", "2 * sin(x) * cos(y)", BASE2, U(-1, 1, 100), None),
    ("Neat-6", "harmonic(x)", NEAT6, E(1, 50, 50), E(1, 120, 120)),
    ("Neat-7", "2 - 2.1 * cos(9.8 * x) * sin(1.3 * y)", NEAT7,
     E(-50, 50, 100000), None),
    ("Neat-8", "exp(-(x - 1)^2) / (1.2 + (y - 2.5)^2)", NEAT8,
     U(0.3, 4, 100), None),
    ("Neat-9", "1 / (1 + x^(-4)) + 1 / (1 + y^(-4))", BASE2,
     E(-5, 5, 21), None),
]


def filename(name):
    slug = name.lower().replace("*", "-star")
    slug = re.sub(r"[^a-z0-9]+", "-", slug).strip("-")
    return slug + ".json"


def main():
    out_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                           os.pardir, "benchmarks")
    os.makedirs(out_dir, exist_ok=True)
    seen = set()
    for name, expr, lib, train, test in SPECS:
        fn = filename(name)
        assert fn not in seen, fn
        seen.add(fn)
        spec = {"name": name, "expression": expr, "library": lib,
                "train": train}
        if test is not None:
            spec["test"] = test
        with open(os.path.join(out_dir, fn), "w") as f:
            json.dump(spec, f, indent=2)
            f.write("\n")
    print(f"wrote {len(SPECS)} specs to {out_dir}")


if __name__ == "__main__":
    main()
