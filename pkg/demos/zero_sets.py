"""Zero sets of recurrences and of a binomial gap, as automata."""

from autoseries.codec import encode_int
from autoseries.dfao import equivalent
from autoseries.fields import FqField
from autoseries.zerosets import LinearRecurrence, binomial_gap_zero_set, lrs_zero_dfao, mod_acceptor

fib = LinearRecurrence.from_recurrence(FqField(2), [1, 1], [0, 1])
M = lrs_zero_dfao(fib)
print("Fibonacci mod 2 vanishes at:", [n for n in range(30) if M(encode_int(n, 2))])
print("same automaton as 'n = 0 mod 3':", equivalent(M, mod_acceptor(2, 3)))

rec = LinearRecurrence.from_recurrence(FqField(5), [1, 0, 4], [0, 1, 1])
Z = lrs_zero_dfao(rec)
print("a_{n+3} = a_{n+2} + 4 a_n over F_5: automaton with", Z.num_states, "states")
print("  zeros below 200:", [n for n in range(200) if Z(encode_int(n, 5))])

for p in (2, 3):
    rep = binomial_gap_zero_set(p, p ** 6)
    print(f"(1+t)^n = 1 + t^n over F_{p} for n in", rep.members, "language", rep.to_json()["language"])
