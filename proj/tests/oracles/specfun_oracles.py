"""Reference values for tests/test_specfun.cpp (mpmath, 30 digits)."""
import mpmath as mp

mp.mp.dps = 30


def show(label, v):
    v = mp.mpc(v)
    print(f"{label}: {mp.nstr(v.real, 20)} {mp.nstr(v.imag, 20)}")


show("lgamma(0.3+2i)", mp.loggamma(mp.mpc(0.3, 2)))
show("lgamma(12.5-7i)", mp.loggamma(mp.mpc(12.5, -7)))
show("lgamma(-2.5+0.5i)", mp.loggamma(mp.mpc(-2.5, 0.5)))
show("gamma(-3.7)", mp.gamma(-3.7))
show("gamma(4+3i)", mp.gamma(mp.mpc(4, 3)))
show("digamma(0.25+1i)", mp.digamma(mp.mpc(0.25, 1)))
show("digamma(-1.5+0.2i)", mp.digamma(mp.mpc(-1.5, 0.2)))
show("digamma(30)", mp.digamma(30))
cases = [
    ((0.5, 1.5, 2.25), 0.3),
    ((1.2 + 0.7j, 0.3 - 0.2j, 2.1 + 0.5j), 0.8),
    ((1.2 + 0.7j, 0.3 - 0.2j, 2.1 + 0.5j), 0.97),
    ((0.4, 0.9, 1.1), 0.95),
    ((0.4, 0.9, 1.3), 0.99),  # c-a-b = 0
    ((0.4, 0.9, 3.3), 0.999),  # c-a-b = 2
    ((0.4, 0.9, 0.3), 0.95),  # c-a-b = -1
    ((1.5 + 2j, 1.5 - 2j, 1.0), 0.98),  # c-a-b = -2
    ((4.0, 0.5 + 3j, 5.5 + 3j), 0.9999),  # c-a-b = 1
    ((2.0, 3.0, 1.5), 0.93),
]
for (a, b, c), x in cases:
    show(f"2f1({a},{b},{c},{x})", mp.hyp2f1(a, b, c, x))
show("2f1(-2,6,2,0.5)", mp.hyp2f1(-2, 6, 2, 0.5))
show("2f1(-3,2+1i,0.5,-4)", mp.hyp2f1(-3, mp.mpc(2, 1), 0.5, -4))
show("3f2(-3,5.5,1+2i;2,2.5)", mp.hyp3f2(-3, 5.5, mp.mpc(1, 2), 2, 2.5, 1))
show("C_5^{3.5}(0.3)", mp.gegenbauer(5, 3.5, 0.3))
show("H_7(1.3)", mp.hermite(7, 1.3))
show("L_6(2.2)", mp.laguerre(6, 0, 2.2))
show("P_{2.3}^{0.7i}(0.4)", mp.legenp(2.3, 0.7j, 0.4, type=2))
show("P_{3}^{1.2i}(-0.6)", mp.legenp(3, 1.2j, -0.6, type=2))
