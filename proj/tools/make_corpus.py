#!/usr/bin/env python3
"""Writes the bundled corpora under data/.

demo/        50 compounds, small enough for a full pipeline run in seconds
acceptance/  200 compounds: scaffold x R-group series plus public-domain drugs

Output is deterministic; rerun after editing the tables below.
"""
import pathlib
import random

# Each scaffold has one attachment site written as {R}; the R-group text is a
# prefix whose last atom bonds to the scaffold's first atom.
SCAFFOLDS = [
    ("phenyl", "{R}c1ccccc1", "GPCR"),
    ("pyridyl", "{R}c1ccncc1", "Kinase"),
    ("anilide", "{R}C(=O)Nc1ccccc1", "Kinase"),
    ("hydroxyphenyl", "{R}c1ccc(O)cc1", "GPCR"),
    ("morpholine", "{R}N1CCOCC1", "IonChannel"),
    ("naphthyl", "{R}c1ccc2ccccc2c1", "Nuclear"),
    ("piperidine", "{R}C1CCNCC1", "Protease"),
    ("chlorophenoxy", "{R}Oc1ccc(Cl)cc1", "PDE"),
    ("thienyl", "{R}c1cccs1", "CYP450"),
    ("benzamide", "{R}c1ccc(F)cc1C(=O)N", "Phosphatase"),
]

R_GROUPS = [
    "C", "CC", "CCC", "CC(C)", "O", "N", "Cl", "F", "Br", "CO",
    "N#C", "FC(F)(F)", "CC(=O)N", "CS(=O)(=O)", "CN(C)",
]

# Para-disubstituted benzenes for double-cut pairs: first group prefix,
# second group in a branch.
DISUBSTITUTED = [(a, b) for a in ["C", "CC", "O", "Cl", "CO", "N"] for b in ["C", "F", "Cl", "OC", "N"]]

DRUGS = [
    ("aspirin", "CC(=O)Oc1ccccc1C(=O)O"),
    ("paracetamol", "CC(=O)Nc1ccc(O)cc1"),
    ("ibuprofen", "CC(C)Cc1ccc(cc1)C(C)C(=O)O"),
    ("caffeine", "Cn1cnc2c1c(=O)n(C)c(=O)n2C"),
    ("naproxen", "COc1ccc2cc(ccc2c1)C(C)C(=O)O"),
    ("diazepam", "CN1C(=O)CN=C(c2ccccc2)c2cc(Cl)ccc21"),
    ("nicotine", "CN1CCCC1c1cccnc1"),
    ("metformin", "CN(C)C(=N)NC(=N)N"),
    ("salicylic_acid", "O=C(O)c1ccccc1O"),
    ("phenacetin", "CCOc1ccc(NC(C)=O)cc1"),
    ("lidocaine", "CCN(CC)CC(=O)Nc1c(C)cccc1C"),
    ("benzocaine", "CCOC(=O)c1ccc(N)cc1"),
    ("procaine", "CCN(CC)CCOC(=O)c1ccc(N)cc1"),
    ("theophylline", "Cn1c(=O)c2[nH]cnc2n(C)c1=O"),
    ("acetanilide", "CC(=O)Nc1ccccc1"),
    ("antipyrine", "CC1=CC(=O)N(N1C)c1ccccc1"),
    ("propranolol", "CC(C)NCC(O)COc1cccc2ccccc12"),
    ("chlorpromazine", "CN(C)CCCN1c2ccccc2Sc2ccc(Cl)cc21"),
    ("haloperidol", "OC1(CCN(CCCC(=O)c2ccc(F)cc2)CC1)c1ccc(Cl)cc1"),
    ("fluoxetine", "CNCCC(Oc1ccc(cc1)C(F)(F)F)c1ccccc1"),
]

DRUG_CLASSES = {
    "caffeine": ["PDE", "GPCR"],
    "theophylline": ["PDE"],
    "diazepam": ["Ion channel"],
    "nicotine": ["ion channel"],
    "propranolol": ["GPCR"],
    "chlorpromazine": ["GPCR", "Ion Channel"],
    "haloperidol": ["GPCR"],
    "fluoxetine": ["transporter"],
    "lidocaine": ["ion channel"],
    "procaine": ["Ion channel"],
    "aspirin": ["enzyme"],
    "ibuprofen": ["enzyme"],
}

ACTIVITY_HEADER = ["compound_id", "assay_id", "target_id", "target_class", "type", "relation", "value", "units",
                   "journal", "year"]


def series():
    """(id, smiles, classes) for the scaffold and disubstituted series."""
    out = []
    for s, (name, pattern, cls) in enumerate(SCAFFOLDS):
        for r, group in enumerate(R_GROUPS):
            classes = [cls]
            # Every fifth member is also screened elsewhere; every seventh has
            # only an off-list class.
            if r % 5 == 4:
                classes.append(SCAFFOLDS[(s + 1) % len(SCAFFOLDS)][2])
            if r % 7 == 6:
                classes = ["transporter"]
            out.append((f"PC{s:02d}{r:02d}", pattern.replace("{R}", group), classes))
    for i, (a, b) in enumerate(DISUBSTITUTED):
        out.append((f"PD{i:03d}", f"{a}c1ccc({b})cc1", ["Kinase"] if i % 2 else ["GPCR"]))
    return out


def activities(rows, rng):
    acts = []
    for cid, _, classes in rows:
        for k, cls in enumerate(classes):
            acts.append([cid, f"A{rng.randrange(10000, 99999)}", f"T{sum(map(ord, cls)) % 1000:03d}", cls, "IC50", "=",
                         f"{rng.uniform(1, 10000):.1f}", "nM", "J Med Chem", str(2000 + rng.randrange(15))])
    return acts


def write(directory, rows, rng, extra_activity_rows=()):
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / "compounds.tsv", "w") as f:
        f.write("compound_id\tsmiles\n")
        for cid, smi, _ in rows:
            f.write(f"{cid}\t{smi}\n")
    with open(directory / "activities.tsv", "w") as f:
        f.write("\t".join(ACTIVITY_HEADER) + "\n")
        for row in activities(rows, rng):
            f.write("\t".join(row) + "\n")
        for row in extra_activity_rows:
            f.write("\t".join(row) + "\n")


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "data"
    drugs = [(f"DRUG_{name.upper()}", smi, DRUG_CLASSES.get(name, [])) for name, smi in DRUGS]
    full = series()

    # 150 series + 30 disubstituted + 20 drugs.
    acceptance = full + drugs
    assert len(acceptance) == 200, len(acceptance)
    write(root / "acceptance", acceptance, random.Random(7))

    # Demo: two GPCR series, two kinase series, a little of everything else.
    pick = []
    for s, r_count in [(0, 12), (1, 12), (2, 8), (3, 6)]:
        pick += [row for row in full if row[0].startswith(f"PC{s:02d}")][:r_count]
    pick += [row for row in full if row[0].startswith("PD")][:6]
    pick += drugs[:6]
    assert len(pick) == 50, len(pick)
    write(root / "demo", pick, random.Random(11))


if __name__ == "__main__":
    main()
