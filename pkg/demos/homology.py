"""Comparing actors by shape: two parity automata over different alphabets."""

from sysactor import classify, dyn_homological, homological, identical
from sysactor.fixtures import automata_env, classify_env


def main():
    env = automata_env()
    p01, pab, mono = env.actor("P01"), env.actor("Pab"), env.actor("Mono")
    print("P01 identical to Pab:", identical(p01, pab))
    iso = homological(p01, pab)
    print("P01 homological to Pab via", dict(iso.trn_map), "on inputs")
    print("P01 dynamically homological to Mono:", dyn_homological(p01, mono) is not None)

    print("\nClasses:")
    for name in ("P01", "Mono"):
        print(f"  {name}: behavior {classify(name, env).behavioral}")
    env = classify_env()
    for name in ("Receptor", "Generator", "Mono"):
        print(f"  {name}: {', '.join(sorted(classify(name, env).communication))}")


if __name__ == "__main__":
    main()
