"""
Budgets, resuming and parallel runs from the command line
=========================================================

The drivers count candidates, not seconds.  A run can stop, write its
state and be resumed later; the result is the same as one long run.
Work is merged by cursor index, so the worker count never changes a report.
"""

import json
import os
import tempfile

from tng import cli
from tng.corpus import get

tmp = tempfile.mkdtemp()
pres = os.path.join(tmp, "torus_link_2_4.pres")
with open(pres, "w") as fh:
    fh.write(get("torus_link_2_4").to_text())


def tng(*args):
    code = cli.main([str(a) for a in args])
    print("tng", " ".join(str(a) for a in args[:1]), "->", code)
    return code


common = ["--pres", pres, "--max-degree", 3, "--max-char-order", 4]

# one run of 30 candidates
tng("ball", *common, "--budget", 30, "--out", os.path.join(tmp, "whole.json"))

# 10 candidates, save, then 20 more
tng("ball", *common, "--budget", 10, "--save-state", os.path.join(tmp, "state.json"),
    "--out", os.path.join(tmp, "part.json"))
tng("resume", "--state", os.path.join(tmp, "state.json"), "--budget", 20, "--out", os.path.join(tmp, "resumed.json"))

# the same 30 candidates on two worker processes
tng("ball", *common, "--budget", 30, "--workers", 2, "--out", os.path.join(tmp, "parallel.json"))


def read(name):
    with open(os.path.join(tmp, name), "rb") as fh:
        return fh.read()


print("resumed == whole:", read("resumed.json") == read("whole.json"))
print("parallel == whole:", read("parallel.json") == read("whole.json"))
report = json.loads(read("whole.json"))
print("status:", report["status"], " ball vertices:", report["ball"]["vertices"])
