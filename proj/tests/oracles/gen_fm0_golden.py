#!/usr/bin/env python3
"""Writes golden FM0 baseband traces (run-length encoded) for the codec tests.

Independent of the C++ encoder: frame layout, CRC-16/CCITT-FALSE and FM0 are
re-derived here. Output format: "<bit_cycles> <first_level> <run> <run> ...".
"""
import math
import pathlib
import sys

CYCLES = {"10k": 1600, "1k": 16000, "512": 31250}

FRAMES = [
    # name, rate, preamble_ms, sender, receiver, type, mid, payload
    ("basic_10k", "10k", 36.0, 1, 4, 0xFF, 7, [0xDE, 0xAD, 0xBE, 0xEF]),
    ("zeros_10k", "10k", 36.0, 0, 0, 0, 0, [0, 0, 0, 0]),
    ("ones_1k", "1k", 36.0, 0xFF, 0xFF, 0xFF, 0xFF, [0xFF] * 4),
    ("mixed_512", "512", 36.0, 3, 9, 0xFF, 200, [0x01, 0x23, 0x45, 0x67]),
]


def crc16_ccitt_false(data):
    crc = 0xFFFF
    for byte in data:
        for i in range(8):
            bit = (byte >> (7 - i)) & 1
            top = (crc >> 15) & 1
            crc = (crc << 1) & 0xFFFF
            if top ^ bit:
                crc ^= 0x1021
    return crc


def fm0(bits):
    level = 0
    out = []
    for b in bits:
        level ^= 1
        out.append(level)
        if b == 0:
            level ^= 1
        out.append(level)
    return out


def rle(levels, cycles):
    runs = []
    prev, count = levels[0], 0
    for lv in levels:
        if lv == prev:
            count += 1
        else:
            runs.append(count)
            prev, count = lv, 1
    runs.append(count)
    return f"{cycles} {levels[0]} " + " ".join(map(str, runs)) + "\n"


def frame_levels(rate, preamble_ms, sender, receiver, mtype, mid, payload):
    bps = 16e6 / CYCLES[rate]
    n_pre = math.ceil(preamble_ms * 1e-3 * bps / 8 - 1e-9)
    body = [sender, receiver, mtype, mid] + payload
    crc = crc16_ccitt_false(body)
    data = [0xBB] * n_pre + [0xAA] + body + [crc >> 8, crc & 0xFF]
    bits = [(b >> (7 - i)) & 1 for b in data for i in range(8)]
    return fm0(bits)


def main():
    assert crc16_ccitt_false(b"123456789") == 0x29B1
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent.parent / "golden")
    out.mkdir(parents=True, exist_ok=True)
    for name, rate, pre, s, r, t, m, p in FRAMES:
        levels = frame_levels(rate, pre, s, r, t, m, p)
        (out / f"{name}.rle").write_text(rle(levels, CYCLES[rate]))
        print(name, len(levels), "half-symbols")


if __name__ == "__main__":
    main()
