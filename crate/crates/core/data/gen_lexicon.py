#!/usr/bin/env python3
"""Regenerates lexicon.json, the bundled demo sign lexicon.

Poses are synthetic placeholders: each sign gets a deterministic,
visually distinct arm/head motion derived from its gloss. Components are
rounded to 7 decimals, which keeps every quaternion within 1e-6 of unit norm.

    python3 gen_lexicon.py > lexicon.json
"""
import hashlib
import json
import math
import random
import unicodedata

SKELETON = "mal2sign-skeleton-11/1"
JOINTS = ["root", "spine", "chest", "neck", "head",
          "shoulder.L", "elbow.L", "wrist.L",
          "shoulder.R", "elbow.R", "wrist.R"]
HANDSHAPES = ["flat", "fist", "point", "spread", "pinch"]

WORD_SIGNS = [
    ("I", ["ഞാൻ"]), ("YOU", ["നീ"]), ("HE", ["അവൻ"]), ("SHE", ["അവൾ"]),
    ("WE", ["ഞങ്ങൾ"]), ("THEY", ["അവർ"]), ("CHILD", ["കുട്ടി"]),
    ("HOUSE", ["വീട്"]), ("TREE", ["മരം"]), ("BOOK", ["പുസ്തകം"]),
    ("WATER", ["വെള്ളം"]), ("FOOD", ["ഭക്ഷണം"]), ("SCHOOL", ["സ്കൂൾ"]),
    ("HOSPITAL", ["ആശുപത്രി"]), ("BANK", ["ബാങ്ക്", "ബാങ്ക"]), ("TRAIN", ["തീവണ്ടി"]),
    ("TEACHER", ["അധ്യാപകൻ"]), ("GO", ["പോകുക"]), ("COME", ["വരുക"]),
    ("RUN", ["ഓടുക"]), ("EAT", ["കഴിക്കുക"]), ("PLAY", ["കളിക്കുക"]),
    ("STUDY", ["പഠിക്കുക"]), ("READ", ["വായിക്കുക"]), ("GOOD", ["നല്ല"]), ("BIG", ["വലിയ"]),
    ("NOT", ["ഇല്ല"]), ("TODAY", ["ഇന്ന്"]), ("ONE", ["ഒന്ന്"]),
    ("TWO", ["രണ്ട്"]),
]


def alphabet():
    out = []
    for cp in range(0x0D00, 0x0D80):
        c = chr(cp)
        name = unicodedata.name(c, "")
        if not name or cp == 0x0D4D:
            continue
        if name.startswith(("MALAYALAM LETTER", "MALAYALAM VOWEL SIGN",
                            "MALAYALAM SIGN ANUSVARA", "MALAYALAM SIGN VISARGA",
                            "MALAYALAM AU LENGTH MARK")):
            if "ARCHAIC" in name or "DOT REPH" in name:
                continue
            out.append(cp)
    return out


def quat(axis, angle):
    n = math.sqrt(sum(a * a for a in axis))
    s, c = math.sin(angle / 2), math.cos(angle / 2)
    q = [c] + [a / n * s for a in axis]
    return [round(v, 7) + 0.0 for v in q]


def pose(rng, shape_l, shape_r, face):
    rot = {j: [1.0, 0.0, 0.0, 0.0] for j in JOINTS}
    rot["spine"] = quat([0, 1, 0], rng.uniform(-0.1, 0.1))
    rot["neck"] = quat([1, 0, 0], rng.uniform(-0.15, 0.15))
    rot["head"] = quat([0, 1, 0], rng.uniform(-0.3, 0.3))
    rot["shoulder.R"] = quat([rng.uniform(-0.3, 0.3), 0.2, 1], rng.uniform(0.3, 1.6))
    rot["elbow.R"] = quat([0, 0, 1], rng.uniform(0.2, 2.0))
    rot["wrist.R"] = quat([1, 0, 0], rng.uniform(-0.6, 0.6))
    rot["shoulder.L"] = quat([rng.uniform(-0.3, 0.3), -0.2, -1], rng.uniform(0.0, 1.2))
    rot["elbow.L"] = quat([0, 0, -1], rng.uniform(0.0, 1.6))
    rot["wrist.L"] = quat([1, 0, 0], rng.uniform(-0.4, 0.4))
    return {
        "rotations": rot,
        "handshape": {"left": shape_l, "right": shape_r},
        "facial": face,
    }


def rng_for(gloss):
    return random.Random(int(hashlib.sha256(gloss.encode()).hexdigest()[:16], 16))


def face(rng, expressive):
    if not expressive:
        return {"brow_raise": 0.0, "mouth_open": 0.0, "smile": 0.0}
    return {k: round(rng.uniform(0, 0.8), 3) for k in ("brow_raise", "mouth_open", "smile")}


def word_sign(gloss, roots):
    rng = rng_for(gloss)
    duration = round(rng.uniform(0.8, 1.4), 2)
    times = [0.0, round(duration * rng.uniform(0.35, 0.65), 2), duration]
    shapes = [rng.choice(HANDSHAPES) for _ in times]
    kfs = []
    for i, t in enumerate(times):
        kf = {"time": t}
        kf.update(pose(rng, "neutral" if i == 0 else rng.choice(HANDSHAPES), shapes[i],
                       face(rng, i == 1)))
        kfs.append(kf)
    return {"gloss": gloss, "roots": roots, "keyframes": kfs}


def letter_sign(gloss):
    rng = rng_for(gloss)
    shape = rng.choice(HANDSHAPES)
    kfs = []
    for t in (0.0, 0.5):
        kf = {"time": t}
        kf.update(pose(rng, "neutral", shape, face(rng, False)))
        kfs.append(kf)
    return {"gloss": gloss, "roots": [], "keyframes": kfs}


def main():
    signs = [word_sign(g, r) for g, r in WORD_SIGNS]
    signs += [letter_sign("FS_%04X" % cp) for cp in alphabet()]
    signs.append(letter_sign("FS_UNKNOWN"))
    doc = {"format": "mal2sign-lexicon/1", "skeleton": SKELETON, "signs": signs}
    text = json.dumps(doc, ensure_ascii=False, indent=1)
    # one quaternion per line is plenty
    import re
    text = re.sub(r"\[\n\s+([-\d.e]+),\n\s+([-\d.e]+),\n\s+([-\d.e]+),\n\s+([-\d.e]+)\n\s+\]",
                  r"[\1, \2, \3, \4]", text)
    print(text)


if __name__ == "__main__":
    main()
