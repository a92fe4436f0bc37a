"""Reference tables reproduced by ``abring verify-paper``.

Matrices are rows of exact rational strings, rows and columns in the
canonical object order.  Idempotents map the object they project onto to
their coefficients.
"""

from __future__ import annotations

# Epi<=2 (equivalently Orb(C2))
EPI2_H = [["1", "0"], ["1", "2"]]
EPI2_H_INV = [["1", "0"], ["-1/2", "1/2"]]
EPI2_IDEMPOTENTS = {
    "[2]": {"[2]": "1/2"},
    "[1]": {"[1]": "1", "[2]": "-1/2"},
}

# Epi<=3
EPI3_H = [["1", "0", "0"], ["1", "2", "0"], ["1", "6", "6"]]
EPI3_H_INV = [["1", "0", "0"], ["-1/2", "1/2", "0"], ["1/3", "-1/2", "1/6"]]
EPI3_IDEMPOTENTS = {
    "[3]": {"[3]": "1/6"},
    "[2]": {"[2]": "1/2", "[3]": "-1/2"},
    "[1]": {"[1]": "1", "[2]": "-1/2", "[3]": "1/3"},
}

# Epi<=4; arrow labels 14 = |[4] ->> [2]| and 36 = |[4] ->> [3]|
EPI4_H = [["1", "0", "0", "0"], ["1", "2", "0", "0"],
          ["1", "6", "6", "0"], ["1", "14", "36", "24"]]
EPI4_H_INV = [["1", "0", "0", "0"], ["-1/2", "1/2", "0", "0"],
              ["1/3", "-1/2", "1/6", "0"], ["-1/4", "11/24", "-1/4", "1/24"]]
EPI4_IDEMPOTENTS = {
    "[4]": {"[4]": "1/24"},
    "[3]": {"[3]": "1/6", "[4]": "-1/4"},
    "[2]": {"[2]": "1/2", "[3]": "-1/2", "[4]": "11/24"},
    "[1]": {"[1]": "1", "[2]": "-1/2", "[3]": "1/3", "[4]": "-1/4"},
}

# Orb(C6); basis C6/C6, C6/C3, C6/C2, C6/C1, with C6 written for C6/C1
C6_H = [["1", "0", "0", "0"], ["1", "2", "0", "0"],
        ["1", "0", "3", "0"], ["1", "2", "3", "6"]]
C6_H_INV = [["1", "0", "0", "0"], ["-1/2", "1/2", "0", "0"],
            ["-1/3", "0", "1/3", "0"], ["1/6", "-1/6", "-1/6", "1/6"]]
# e_K projects onto the factor C6/K
C6_IDEMPOTENTS = {
    "C6/C1": {"C6/C1": "1/6"},
    "C6/C2": {"C6/C2": "1/3", "C6/C1": "-1/6"},
    "C6/C3": {"C6/C3": "1/2", "C6/C1": "-1/6"},
    "C6/C6": {"C6/C6": "1", "C6/C3": "-1/2", "C6/C2": "-1/3", "C6/C1": "1/6"},
}
C6_PRODUCTS = [
    ("C6/C1", "C6/C1", {"C6/C1": "6"}),
    ("C6/C1", "C6/C3", {"C6/C1": "2"}),
    ("C6/C1", "C6/C2", {"C6/C1": "3"}),
    ("C6/C3", "C6/C3", {"C6/C3": "2"}),
    ("C6/C2", "C6/C3", {"C6/C1": "1"}),
    ("C6/C2", "C6/C2", {"C6/C2": "3"}),
]
C6_UNIT = "C6/C6"
