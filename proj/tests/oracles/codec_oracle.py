#!/usr/bin/env python3
"""Second, independent implementation of the wire codec for golden vectors.

Encodes a fixed set of messages and writes tests/vectors/codec_golden.json.
The C++ suite encodes the same messages and must produce identical bytes.
Regenerate with:
    python3 tests/oracles/codec_oracle.py > ../vectors/codec_golden.json
(run from tests/oracles/).
"""
import json
import struct
import sys

from bls_ref import Fp12, pairing, G1_GEN, g2_generator

VERSION = 1

TAGS = {
    "UploadCheck": 3,
    "UploadCheckResp": 4,
    "DedupChallenge": 10,
    "DownloadReq": 15,
    "KeyProvisionResp": 21,
    "Error": 31,
}


def be32(v):
    return struct.pack(">I", v)


def be16(v):
    return struct.pack(">H", v)


def frame(tag, body):
    payload = bytes([VERSION, tag]) + body
    return be32(len(payload)) + payload


def upload_check():
    h = bytes([0xAA] * 32)
    sig = bytes([0xBB] * 64)
    u_id = bytes([0xCC] * 16)
    pk_sig = bytes([0xDD] * 32)
    return frame(TAGS["UploadCheck"], h + sig + u_id + pk_sig)


def download_req():
    f_id = bytes(range(16))
    u_id = bytes([0x11] * 16)
    sig = bytes([0x22] * 64)
    return frame(TAGS["DownloadReq"], f_id + u_id + sig)


def error_msg():
    return frame(TAGS["Error"], be16(32))  # AccessDenied


def dedup_challenge():
    f_id = bytes([0x0F] * 16)
    nonce = bytes([0xF0] * 16)
    regions = [(0, 50), (100, 200), (9500, 10000)]
    body = f_id + nonce + be32(len(regions))
    for s, e in regions:
        body += be16(s) + be16(e)
    return frame(TAGS["DedupChallenge"], body)


def key_provision_resp(z):
    d1 = z
    d2 = z * z
    return frame(TAGS["KeyProvisionResp"], d1.to_bytes() + d2.to_bytes())


def upload_check_resp_new(z):
    f_id = bytes([0x42] * 16)
    rek = z.to_bytes() + (z * z).to_bytes()
    return frame(TAGS["UploadCheckResp"], bytes([0]) + f_id + bytes([1]) + rek)


def main():
    z = pairing(G1_GEN, g2_generator())
    out = {
        "upload_check": upload_check().hex(),
        "download_req": download_req().hex(),
        "error_access_denied": error_msg().hex(),
        "dedup_challenge": dedup_challenge().hex(),
        "key_provision_resp": key_provision_resp(z).hex(),
        "upload_check_resp_new": upload_check_resp_new(z).hex(),
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
