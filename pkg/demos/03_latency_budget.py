# # Latency budget
#
# Closed-form latency of the three architectures for the B1 code.

from fractions import Fraction

from layered_qldpc import LatencyQuery, latency

# ## Parallel (flooded) decoder, 8-10 ns clock, 30 iterations

for clock in (8, 10):
    print("parallel", clock, latency(LatencyQuery("parallel", clock, it_max=30)), "ns")

# ## Serial decoder: one check per clock cycle
#
# The clock can be 70-80 % of the parallel one, but each iteration costs
# m cycles.

for clock in ("5.6", "7"):
    ns = latency(LatencyQuery("serial", clock, it_max=30, m=884))
    print("serial", clock, float(ns) / 1000, "us")

# ## Layered decoder with the (2,7,1)-cover of B1

k_over_t = Fraction(7, 2)
for its in (30, 15):
    for clock in (8, 10):
        ns = latency(LatencyQuery("layered", clock, fractional_layers=k_over_t, iterations=its))
        print("layered", its, clock, float(ns), "ns")
