"""
A Las Vegas stopping rule on cones
==================================

Start a walk on a leaf of a cone, measure whether it sits on the cone vertex
every t1 = pi/(2 sqrt n), and once it does, let it run t0 more so that it
spreads uniformly.  On a miss we can either restart from the leaf or keep the
collapsed state.  Restarting gives n rounds on average; continuing at t1 gets
stuck because the collapsed state never returns to the cone.
"""
import numpy as np

from chiralwalk import graphs
from chiralwalk.measured import StoppingRuleConfig, hit_interval, monte_carlo, settle_time

TRIALS = 10000

print(" n   mean rounds   mean time   predicted   hit rate   worst final deviation")
for n in (3, 5, 7, 9):
    base = graphs.odd_clique_signing(n)
    cfg = StoppingRuleConfig(graphs.cone(base), seed=n)
    st = monte_carlo(cfg, TRIALS)
    predicted = n * hit_interval(n) + settle_time(n)
    print(f"{n:2d}   {st.mean_rounds:10.3f}   {st.mean_total_time:9.3f}   {predicted:9.3f}"
          f"   {st.hit_rate:8.3f}   {st.max_final_deviation:.1e}")

# Restart versus continue on the claw, for two measurement intervals.
claw = graphs.cone(graphs.empty(3))
t1 = hit_interval(3)
print("\nclaw, probability that the second measurement hits after the first missed")
for strategy in ("restart", "continue"):
    for frac in (1.0, 0.6):
        cfg = StoppingRuleConfig(claw, strategy=strategy, measure_interval=frac * t1, seed=1)
        st = monte_carlo(cfg, TRIALS)
        print(f"  {strategy:8s} interval {frac:.1f} t1:  {st.post_first_failure_hit_prob:.4f}"
              f"   (overall hit rate {st.hit_rate:.3f})")

# The per-round Born probabilities tell the same story without sampling noise.
cfg = StoppingRuleConfig(claw, strategy="continue", seed=1)
st = monte_carlo(cfg, 200)
print("\ncontinue at t1, mean hit probability per round:",
      np.array2string(np.array(st.per_round_mean_p_hit[:4]), precision=4))
