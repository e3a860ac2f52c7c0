"""A first look at the engine: signs, differentials, potentials and the text format."""

from superfda.brane_cocycles import l_s4
from superfda.fda_format import parse_algebra, serialize
from superfda.graded_algebra import Element, declare_algebra, solve_exactness

print("A toy superspace: exterior x, a polynomial spinor b and a translation e with d e = b b.")
toy = declare_algebra("toy", [("x", (1, False)), ("b", (1, True)), ("e", (1, False))],
                      lambda T: {"e": Element.generator(T, "b") * Element.generator(T, "b")})
x, b, e = toy.gens("x", "b", "e")
print("  x*x =", (x * x).text(), "   b*b =", (b * b).text())
print("  x*b =", (x * b).text(), "   b*x =", (b * x).text())
print("  d e =", toy.d(e).text(), "   d(x*e) =", toy.d(x * e).text())

print("\nThe 4-sphere model: d g7 = -1/2 g4 g4.")
S4 = l_s4()
g4, g7 = S4.gens("g4", "g7")
print("  d g7 =", S4.d(g7).text())
print("  is g4 exact?", solve_exactness(S4, g4) is not None)
print("  potential for g4*g4:", solve_exactness(S4, g4 * g4).text())

print("\nSerialized, parsed back and compared:")
text = serialize(S4, "lS4")
print(" ", text)
print("  round trip equal:", parse_algebra(text) == S4)
