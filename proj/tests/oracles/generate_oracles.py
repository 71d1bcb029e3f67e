#!/usr/bin/env python3
"""Independent high-precision reference values for the test suites.

Everything here is computed with mpmath by direct summation of the defining
series at 80 significant digits. The output is frozen into oracle_values.hpp;
rerun only when adding new reference points:

    python3 tests/oracles/generate_oracles.py > tests/oracle_values.hpp
"""
import mpmath as mp

mp.mp.dps = 80


def ml(alpha, beta, x, deriv=0, terms=None):
    """Direct series for the n-th derivative of E_{alpha,beta}(x)."""
    alpha, beta, x = mp.mpf(alpha), mp.mpf(beta), mp.mpf(x)
    s = mp.mpf(0)
    k = deriv
    small = 0
    while True:
        arg = beta + alpha * k
        t = mp.rf(k - deriv + 1, deriv) * x ** (k - deriv) * mp.rgamma(arg)
        s += t
        if terms is not None:
            if k >= terms:
                break
        elif k > deriv + 20 and abs(t) < mp.mpf(10) ** -70 * abs(s):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        k += 1
    return s


def gfpd_pmf(lam, alpha, beta, k):
    return mp.mpf(lam) ** k * mp.rgamma(mp.mpf(beta) + mp.mpf(alpha) * k) / ml(alpha, beta, lam)


def gfpd_moment(lam, alpha, beta, n):
    norm = ml(alpha, beta, lam)
    s = mp.mpf(0)
    k = 0
    while True:
        t = mp.mpf(k) ** n * gfpd_pmf_unnorm(lam, alpha, beta, k)
        s += t
        if k > 50 and abs(t) < mp.mpf(10) ** -70 * abs(s):
            break
        k += 1
    return s / norm


def gfpd_pmf_unnorm(lam, alpha, beta, k):
    return mp.mpf(lam) ** k * mp.rgamma(mp.mpf(beta) + mp.mpf(alpha) * k)


def sfpd_pmf(alpha_s, nu, lam, k):
    """Alternating series of the standard fractional Poisson PMF."""
    mp.mp.dps = 400
    a = mp.mpf(alpha_s)
    z = mp.mpf(nu) * mp.mpf(lam) ** a
    s = mp.mpf(0)
    n = 0
    prev = None
    small = 0
    while True:
        t = mp.factorial(k + n) / mp.factorial(n) * (-z) ** n * mp.rgamma(a * (k + n) + 1)
        s += t
        if prev is not None and abs(t) < abs(prev) and abs(t) < mp.mpf(10) ** -60 * abs(s):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        prev = t
        n += 1
    r = z ** k / mp.factorial(k) * s
    mp.mp.dps = 80
    return r


def emit(name, value, digits=20):
    print(f"inline constexpr double {name} = {mp.nstr(value, digits, min_fixed=-5, max_fixed=6)};")


print("// Generated by tests/oracles/generate_oracles.py (mpmath, 80 digits). Do not edit.")
print("#pragma once\n")
print("namespace oracle {\n")

emit("kMl_0755_1040_at5", ml("0.755", "10.40", 5, terms=400))
emit("kMl_05_2_at5_d3", ml("0.5", "2", 5, deriv=3))
emit("kMl_075_05_at1_d2", ml("0.75", "0.5", 1, deriv=2))
emit("kMl_1_m4_at2", ml("1", "-4", 2))
emit("kMl_05_1_atm3", ml("0.5", "1", -3))
emit("kMl_03_1_atm2", ml("0.3", "1", -2))
emit("kMl_05_1_atm30", mp.exp(mp.mpf(900)) * mp.erfc(30))
emit("kLogMl_05_1_at30", mp.log(ml("0.5", "1", 30)))
for a in ("0.6", "1.0", "1.4"):
    for b in ("1", "3"):
        tag = a.replace(".", "") + "_" + b
        emit(f"kLogMl_{tag}_at200", mp.log(ml(a, b, 200)))

emit("kGfpdPmf_5_0755_1040_k3", gfpd_pmf(5, "0.755", "10.40", 3))
emit("kGfpdMu1_5_0755_1040", gfpd_moment(5, "0.755", "10.40", 1))
emit("kGfpdMu2_5_0755_1040", gfpd_moment(5, "0.755", "10.40", 2))
emit("kGfpdMu6_5_05_05", gfpd_moment(5, "0.5", "0.5", 6))
emit("kGfpdMu4_5_15_1040", gfpd_moment(5, "1.5", "10.40", 4))

# Sign scan of 1/Gamma(-0.5 + 0.7 k) for k = 0..30: first negative term.
first_neg = -1
for k in range(31):
    if mp.rgamma(mp.mpf("-0.5") + mp.mpf("0.7") * k) < 0:
        first_neg = k
        break
print(f"inline constexpr int kFirstNegative_5_07_m05 = {first_neg};")

emit("kSfpd_05_1_5_k0", ml("0.5", "1", -mp.sqrt(5)))
emit("kSfpd_05_1_5_k0_series", sfpd_pmf("0.5", 1, 5, 0))
for a_s, ks in (("0.5", (1, 3, 10, 25)), ("0.2", (0, 2, 7, 25)), ("0.9", (4, 12)), ("0.1", (0, 5, 30))):
    for k in ks:
        emit(f"kSfpd_{a_s.replace('.', '')}_1_5_k{k}", sfpd_pmf(a_s, 1, 5, k))

mu = mp.sqrt(5) / mp.gamma(mp.mpf("1.5"))
emit("kSfpdMean_05_1_5", mu)
emit("kSfpdVar_05_1_5", mu + mu ** 2 * (mp.sqrt(mp.pi) * mp.gamma(mp.mpf("1.5")) / mp.gamma(1) - 1))

print("\n}  // namespace oracle")
