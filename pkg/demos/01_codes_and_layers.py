# # Codes and layer decompositions
#
# Build the C2 hypergraph product code, load B1, and look at the layer
# covers used for layered decoding.

# ## Imports

from layered_qldpc import (
    b1_cover,
    build_c2,
    c2_component_layers,
    circulant,
    css_dimension,
    density_bound,
    greedy_decompose,
    hgp_layers,
    load_b1,
    validate_cover,
)

# ## C2: hypergraph product of a 31 x 31 circulant with itself

c2 = build_c2()
print(c2.n, c2.m_x, css_dimension(c2))

# The circulant of 1 + x^2 + x^5 has a 5-layer decomposition (which is also
# valid for its transpose).

circ = circulant({0, 2, 5}, 31)
comp = c2_component_layers()
print(validate_cover(circ, comp))
print(validate_cover(circ.T, comp))

# Greedy colouring of the conflict graph does not always find it:

print(greedy_decompose(circ).k)

# ## Product layers
#
# Pair row a of A and row b of B^t into the same layer whenever their layer
# indices differ by i (mod k). The result is a 5-layer decomposition of H_X,
# better balanced than either factor.

cover = hgp_layers(comp, comp, A=circ, Bt=circ.T)
print(cover.sizes())
print(validate_cover(c2.h_x, cover))
print("density bound:", density_bound(c2.h_x))

# A cyclic shift of the A layers (any permutation sigma works) gives another
# valid decomposition:

print(validate_cover(c2.h_x, hgp_layers(comp, comp, sigma=[2, 0, 1, 4, 3])).valid)

# ## B1 and its 2-cover in 7 layers

b1 = load_b1()
print(b1.n, css_dimension(b1))
cover = b1_cover(b1.m_x)
report = validate_cover(b1.h_x, cover)
print(report)

# Layers i and i + 3 (mod 7) share checks; a constrained random order
# never runs them back to back.

print(cover.conflicts().astype(int))
