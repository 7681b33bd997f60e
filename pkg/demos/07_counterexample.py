"""
The whole pipeline
==================

Same as ``noncancel counterexample --p 2 --q 3 --r 2,2 --format text``.
"""
from noncancel.cli import RunConfig, render_text, run_counterexample

report = run_counterexample(2, 3, (2, 2), RunConfig(seed=0))
print(render_text(report))
