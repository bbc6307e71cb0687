"""Inactions, the total inaction and what composing them produces."""

from sysactor import TOTAL_INACTION, CompositionOp, atomic, compose, includes, negate, run_law_suite
from sysactor.fixtures import ea_off_env, run_walk_stand_operator


def main():
    seq = CompositionOp("seq", 2)
    run, walk = atomic("run"), atomic("walk")
    both = compose(seq, [negate(run), negate(walk)])
    print("seq(~run, ~walk) normalizes to", both.id, "- void:", both.is_void)
    print("T_IA includes it:", includes(TOTAL_INACTION, both))

    L = run_walk_stand_operator()
    out = compose(L, [negate(run), negate(walk)])
    print("\nWith the inference operator L over run/walk/stand:")
    print(f"  L(~run, ~walk) = {out.id} (organization {out.organization})")
    (ea,) = run_law_suite(ea_off_env(), "EA")
    print(f"  EA check: {ea.status};", ea.witnesses[0].message)


if __name__ == "__main__":
    main()
