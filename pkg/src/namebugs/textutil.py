"""Small text helpers shared by the canonical file formats."""

import hashlib


def sha256_text(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def fmt_real(x):
    """Canonical 9-significant-digit decimal rendering."""
    return "%.9g" % x


def escape_field(text):
    """Make a string safe for tab/space-delimited records."""
    return (
        text.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace(" ", "\\s")
    )


def unescape_field(text):
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c != "\\" or i + 1 >= len(text):
            out.append(c)
            i += 1
            continue
        e = text[i + 1]
        out.append({"t": "\t", "n": "\n", "r": "\r", "s": " ", "\\": "\\"}
                   .get(e, e))
        i += 2
    return "".join(out)


def derive_seed(globalSeed, label):
    """Stable per-unit seed: hash of the global seed and a unit label."""
    digest = hashlib.sha256(f"{globalSeed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
