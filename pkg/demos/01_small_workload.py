"""Generate a small synthetic workload, mine it, and look at what came back.

Run with ``python demos/01_small_workload.py``.
"""

from alarmcorr import SupportThreshold, generate_rules, mine
from alarmcorr.alarms import queue_stats
from alarmcorr.synth import generate_workload, manifest_patterns, small_profile

wl = generate_workload(small_profile(seed=1))
st = queue_stats(wl.queue)
print(f"{st.events} events in {st.tuples} tuples over {st.span} s, {st.distinct_types} alarm types")

# planted patterns are ground truth; the miner should find every one
window = 5
fs = mine(wl.queue, wl.model, window, SupportThreshold.count(30))
for m in fs.lengths():
    print(f"length {m}: {len(fs.level(m))} frequent sequences")

print("\nplanted pattern                          guaranteed  mined")
for seq, guaranteed in manifest_patterns(wl.manifest):
    shown = " ".join(str(a) for a in seq)
    print(f"{shown:<40} {guaranteed:>10}  {fs.count_of(seq)}")

rules = generate_rules(fs, wl.queue, window, min_conf=0.25)
print(f"\n{len(rules)} rules with confidence >= 0.25, strongest first:")
for r in rules[:8]:
    print(" ", r)
