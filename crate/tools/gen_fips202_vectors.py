#!/usr/bin/env python3
"""Writes SHA-3/SHAKE vectors computed by hashlib for messages of every length
0..=400 bytes (covering several rate boundaries for each function)."""
import hashlib
import sys

out = open(sys.argv[1], "w")
for n in range(401):
    msg = bytes((i * 131 + n * 7 + 3) & 0xFF for i in range(n))
    m = msg.hex() or "-"
    out.write(f"sha3_256 {m} {hashlib.sha3_256(msg).hexdigest()}\n")
    out.write(f"sha3_512 {m} {hashlib.sha3_512(msg).hexdigest()}\n")
    out.write(f"shake128 {m} {hashlib.shake_128(msg).hexdigest(200)}\n")
    out.write(f"shake256 {m} {hashlib.shake_256(msg).hexdigest(200)}\n")
