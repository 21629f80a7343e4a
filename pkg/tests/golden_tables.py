"""Printed square-B tables and worked representations, transcribed as published.

Offsets k of the "N+k" tables, row-major from the top-left cell. The 13x13 table
keeps its two misprints; tests apply KNOWN_TABLE_CORRECTIONS before comparing.
"""

OFFSETS_3 = [
    [3, 8, 1],
    [2, 4, 6],
    [7, 0, 5],
]

OFFSETS_5 = [
    [10, 23, 6, 19, 2],
    [3, 11, 24, 7, 15],
    [16, 4, 12, 20, 8],
    [9, 17, 0, 13, 21],
    [22, 5, 18, 1, 14],
]

OFFSETS_7 = [
    [21, 46, 15, 40, 9, 34, 3],
    [4, 22, 47, 16, 41, 10, 28],
    [29, 5, 23, 48, 17, 35, 11],
    [12, 30, 6, 24, 42, 18, 36],
    [37, 13, 31, 0, 25, 43, 19],
    [20, 38, 7, 32, 1, 26, 44],
    [45, 14, 39, 8, 33, 2, 27],
]

OFFSETS_9 = [
    [36, 77, 28, 69, 20, 61, 12, 53, 4],
    [5, 37, 78, 29, 70, 21, 62, 13, 45],
    [46, 6, 38, 79, 30, 71, 22, 54, 14],
    [15, 47, 7, 39, 80, 31, 63, 23, 55],
    [56, 16, 48, 8, 40, 72, 32, 64, 24],
    [25, 57, 17, 49, 0, 41, 73, 33, 65],
    [66, 26, 58, 9, 50, 1, 42, 74, 34],
    [35, 67, 18, 59, 10, 51, 2, 43, 75],
    [76, 27, 68, 19, 60, 11, 52, 3, 44],
]

OFFSETS_11 = [
    [55, 116, 45, 106, 35, 96, 25, 86, 15, 76, 5],
    [6, 56, 117, 46, 107, 36, 97, 26, 87, 16, 66],
    [67, 7, 57, 118, 47, 108, 37, 98, 27, 77, 17],
    [18, 68, 8, 58, 119, 48, 109, 38, 88, 28, 78],
    [79, 19, 69, 9, 59, 120, 49, 99, 39, 89, 29],
    [30, 80, 20, 70, 10, 60, 110, 50, 100, 40, 90],
    [91, 31, 81, 21, 71, 0, 61, 111, 51, 101, 41],
    [42, 92, 32, 82, 11, 72, 1, 62, 112, 52, 102],
    [103, 43, 93, 22, 83, 12, 73, 2, 63, 113, 53],
    [54, 104, 33, 94, 23, 84, 13, 74, 3, 64, 114],
    [115, 44, 105, 34, 95, 24, 85, 14, 75, 4, 65],
]

OFFSETS_13_AS_PRINTED = [
    [78, 163, 66, 151, 54, 139, 42, 127, 30, 115, 18, 103, 6],
    [7, 79, 164, 67, 152, 55, 140, 43, 128, 31, 116, 19, 91],
    [92, 8, 80, 165, 68, 153, 56, 141, 44, 129, 32, 104, 20],
    [21, 93, 9, 81, 166, 69, 154, 57, 142, 45, 117, 33, 105],
    [106, 22, 94, 10, 82, 167, 70, 155, 58, 130, 46, 118, 34],
    [35, 107, 23, 95, 11, 83, 168, 71, 143, 59, 131, 47, 1119],
    [120, 36, 108, 24, 96, 12, 84, 156, 72, 144, 60, 132, 48],
    [49, 121, 37, 109, 25, 97, 0, 85, 157, 73, 145, 61, 133],
    [134, 50, 122, 38, 110, 13, 98, 1, 86, 158, 74, 146, 62],
    [63, 135, 51, 123, 26, 111, 14, 99, 2, 87, 159, 75, 147],
    [148, 64, 136, 39, 12, 27, 112, 15, 100, 3, 88, 160, 76],
    [77, 149, 52, 137, 40, 125, 28, 113, 16, 101, 4, 89, 161],
    [162, 65, 150, 53, 138, 41, 126, 29, 114, 17, 102, 5, 90],
]

OFFSETS_17 = [
    [136, 281, 120, 265, 104, 249, 88, 233, 72, 217, 56, 201, 40, 185, 24, 169, 8],
    [9, 137, 282, 121, 266, 105, 250, 89, 234, 73, 218, 57, 202, 41, 186, 25, 153],
    [154, 10, 138, 283, 122, 267, 106, 251, 90, 235, 74, 219, 58, 203, 42, 170, 26],
    [27, 155, 11, 139, 284, 123, 268, 107, 252, 91, 236, 75, 220, 59, 187, 43, 171],
    [172, 28, 156, 12, 140, 285, 124, 269, 108, 253, 92, 237, 76, 204, 60, 188, 44],
    [45, 173, 29, 157, 13, 141, 286, 125, 270, 109, 254, 93, 221, 77, 205, 61, 189],
    [190, 46, 174, 30, 158, 14, 142, 287, 126, 271, 110, 238, 94, 222, 78, 206, 62],
    [63, 191, 47, 175, 31, 159, 15, 143, 288, 127, 255, 111, 239, 95, 223, 79, 207],
    [208, 64, 192, 48, 176, 32, 160, 16, 144, 272, 128, 256, 112, 240, 96, 224, 80],
    [81, 209, 65, 193, 49, 177, 33, 161, 0, 145, 273, 129, 257, 113, 241, 97, 225],
    [226, 82, 210, 66, 194, 50, 178, 17, 162, 1, 146, 274, 130, 258, 114, 242, 98],
    [99, 227, 83, 211, 67, 195, 34, 179, 18, 163, 2, 147, 275, 131, 259, 115, 243],
    [244, 100, 228, 84, 212, 51, 196, 35, 180, 19, 164, 3, 148, 276, 132, 260, 116],
    [117, 245, 101, 229, 68, 213, 52, 197, 36, 181, 20, 165, 4, 149, 277, 133, 261],
    [262, 118, 246, 85, 230, 69, 214, 53, 198, 37, 182, 21, 166, 5, 150, 278, 134],
    [135, 263, 102, 247, 86, 231, 70, 215, 54, 199, 38, 183, 22, 167, 6, 151, 279],
    [280, 119, 264, 103, 248, 87, 232, 71, 216, 55, 200, 39, 184, 23, 168, 7, 152],
]

PRINTED_OFFSET_TABLES = {
    3: OFFSETS_3,
    5: OFFSETS_5,
    7: OFFSETS_7,
    9: OFFSETS_9,
    11: OFFSETS_11,
    13: OFFSETS_13_AS_PRINTED,
    17: OFFSETS_17,
}

# worked 3x3 representations N + B, as scalar literals
SQUARES_3 = {
    "0": [["3", "8", "1"], ["2", "4", "6"], ["7", "0", "5"]],
    "1": [["4", "9", "2"], ["3", "5", "7"], ["8", "1", "6"]],
    "2": [["5", "10", "3"], ["4", "6", "8"], ["9", "2", "7"]],
    "33": [["36", "41", "34"], ["35", "37", "39"], ["40", "33", "38"]],
    "-5": [["-2", "3", "-4"], ["-3", "-1", "1"], ["2", "-5", "0"]],
    "1+i": [["4+i", "9+i", "2+i"], ["3+i", "5+i", "7+i"], ["8+i", "1+i", "6+i"]],
    "1/2": [["7/2", "17/2", "3/2"], ["5/2", "9/2", "13/2"], ["15/2", "1/2", "11/2"]],
}

SQUARES_5 = {
    "0": [
        [10, 23, 6, 19, 2],
        [3, 11, 24, 7, 15],
        [16, 4, 12, 20, 8],
        [9, 17, 0, 13, 21],
        [22, 5, 18, 1, 14],
    ],
    "5": [
        [15, 28, 11, 24, 7],
        [8, 16, 29, 12, 20],
        [21, 9, 17, 25, 13],
        [14, 22, 5, 18, 26],
        [27, 10, 23, 6, 19],
    ],
}

# the second 5x5 worked square is printed under offset 1 but holds offset 5
PRINTED_SQUARE_5_LABEL = "1"

NORMAL_SQUARE_5 = [
    [11, 24, 7, 20, 3],
    [4, 12, 25, 8, 16],
    [17, 5, 13, 21, 9],
    [10, 18, 1, 14, 22],
    [23, 6, 19, 2, 15],
]

# (order, offset literal, constant literal)
PRINTED_CONSTANTS = [
    (3, "0", "12"),
    (3, "1", "15"),
    (3, "2", "18"),
    (3, "33", "111"),
    (3, "-5", "-3"),
    (3, "1/2", "27/2"),
    (3, "1+i", "15+3i"),
    (3, "193", "591"),
    (5, "0", "60"),
    (5, "1", "65"),
    (7, "0", "168"),
    (7, "1", "175"),
    (9, "0", "360"),
    (9, "1", "369"),
    (9, "2", "378"),
    (9, "44", "756"),
    (11, "0", "660"),
    (13, "0", "1092"),
    (17, "0", "2448"),
    (35, "0", "21420"),
]
