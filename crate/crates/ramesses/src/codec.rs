//! The `RMS1` on-disk format for keys, ciphertexts and plaintexts.
//!
//! Layout: magic `RMS1` (4 bytes) | type byte (0x01 pk, 0x02 sk, 0x03 ct,
//! 0x04 pt) | n, k, w, ℓ as 16-bit little-endian | payload.
//!
//! Payloads: public keys and ciphertexts are n-k field elements of ⌈n/8⌉
//! bytes each; the private key bit-packs the w·n bits of the non-leading
//! coefficients of V_sk in increasing degree order (the monic leading
//! coefficient is implied); plaintexts are the n rows of ⌈n/8⌉ bytes. All
//! multi-byte integers are little-endian, all padding bits must be zero.

use crate::field::FieldElement;
use crate::linalg::{BitMatrix, BitVec};
use crate::scheme::{Ciphertext, ParameterSet, Plaintext, PrivateKey, PublicKey, SchemeError};
use crate::skew::SkewPoly;
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"RMS1";
pub const HEADER_LEN: usize = 13;

const TYPE_PK: u8 = 0x01;
const TYPE_SK: u8 = 0x02;
const TYPE_CT: u8 = 0x03;
const TYPE_PT: u8 = 0x04;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0:#04x}")]
    UnsupportedVersion(u8),
    #[error("wrong object type: expected {expected:#04x}, found {found:#04x}")]
    WrongType { expected: u8, found: u8 },
    #[error("wrong length: expected {expected} bytes, found {found}")]
    Length { expected: usize, found: usize },
    #[error("header parameters are invalid: {0}")]
    InvalidParameters(SchemeError),
    #[error("payload is not canonical (nonzero padding bits or coefficients)")]
    NonCanonical,
}

pub fn public_key_payload_len(params: &ParameterSet) -> usize {
    params.syndrome_len() * params.n().div_ceil(8)
}

pub fn private_key_payload_len(params: &ParameterSet) -> usize {
    (params.w() * params.n()).div_ceil(8)
}

pub fn ciphertext_payload_len(params: &ParameterSet) -> usize {
    public_key_payload_len(params)
}

pub fn plaintext_payload_len(params: &ParameterSet) -> usize {
    params.n() * params.n().div_ceil(8)
}

fn write_header(out: &mut Vec<u8>, tag: u8, params: &ParameterSet) {
    out.extend_from_slice(&MAGIC);
    out.push(tag);
    for v in [params.n(), params.k(), params.w(), params.ell()] {
        out.extend_from_slice(&(v as u16).to_le_bytes());
    }
}

fn parse_header(bytes: &[u8], expected: u8) -> Result<(ParameterSet, &[u8]), CodecError> {
    if bytes.len() < HEADER_LEN {
        return Err(CodecError::Length {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if bytes[..3] != MAGIC[..3] {
        return Err(CodecError::BadMagic);
    }
    if bytes[3] != MAGIC[3] {
        return Err(CodecError::UnsupportedVersion(bytes[3]));
    }
    if bytes[4] != expected {
        return Err(CodecError::WrongType {
            expected,
            found: bytes[4],
        });
    }
    let field = |i: usize| u16::from_le_bytes([bytes[5 + 2 * i], bytes[6 + 2 * i]]) as usize;
    let params = ParameterSet::new(field(0), field(1), field(2), field(3))
        .map_err(CodecError::InvalidParameters)?;
    Ok((params, &bytes[HEADER_LEN..]))
}

fn check_len(payload: &[u8], expected: usize) -> Result<(), CodecError> {
    if payload.len() != expected {
        return Err(CodecError::Length {
            expected: expected + HEADER_LEN,
            found: payload.len() + HEADER_LEN,
        });
    }
    Ok(())
}

fn encode_elements(out: &mut Vec<u8>, elems: &[FieldElement], n: usize) {
    for e in elems {
        out.extend_from_slice(&e.to_bytes(n));
    }
}

fn decode_elements(payload: &[u8], count: usize, n: usize) -> Result<Vec<FieldElement>, CodecError> {
    let stride = n.div_ceil(8);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let chunk = &payload[i * stride..(i + 1) * stride];
        out.push(FieldElement::from_bytes(n, chunk).ok_or(CodecError::NonCanonical)?);
    }
    Ok(out)
}

pub fn encode_public_key(pk: &PublicKey) -> Vec<u8> {
    let params = pk.params();
    let mut out = Vec::with_capacity(HEADER_LEN + public_key_payload_len(params));
    write_header(&mut out, TYPE_PK, params);
    encode_elements(&mut out, pk.syndrome(), params.n());
    out
}

pub fn decode_public_key(bytes: &[u8]) -> Result<PublicKey, CodecError> {
    let (params, payload) = parse_header(bytes, TYPE_PK)?;
    check_len(payload, public_key_payload_len(&params))?;
    let elems = decode_elements(payload, params.syndrome_len(), params.n())?;
    PublicKey::new(params, elems).map_err(CodecError::InvalidParameters)
}

pub fn encode_private_key(sk: &PrivateKey) -> Vec<u8> {
    let params = sk.params();
    let (n, w) = (params.n(), params.w());
    let mut out = Vec::with_capacity(HEADER_LEN + private_key_payload_len(params));
    write_header(&mut out, TYPE_SK, params);
    // w·n coefficient bits, monic leading coefficient implied
    let mut bits = BitVec::zeros(w * n);
    for i in 0..w {
        let coords = sk.map().coeff(i).coords(n);
        for b in 0..n {
            if coords.get(b) {
                bits.set(i * n + b, true);
            }
        }
    }
    out.extend_from_slice(&bits.to_bytes());
    out
}

pub fn decode_private_key(bytes: &[u8]) -> Result<PrivateKey, CodecError> {
    let (params, payload) = parse_header(bytes, TYPE_SK)?;
    check_len(payload, private_key_payload_len(&params))?;
    let (n, w) = (params.n(), params.w());
    let bits = BitVec::from_bytes(w * n, payload).ok_or(CodecError::NonCanonical)?;
    let mut coeffs = Vec::with_capacity(w + 1);
    for i in 0..w {
        let mut coords = BitVec::zeros(n);
        for b in 0..n {
            coords.set(b, bits.get(i * n + b));
        }
        coeffs.push(FieldElement::from_bytes(n, &coords.to_bytes()).expect("canonical"));
    }
    coeffs.push(FieldElement::ONE);
    PrivateKey::new(params, SkewPoly::from_coeffs(coeffs))
        .map_err(CodecError::InvalidParameters)
}

pub fn encode_ciphertext(ct: &Ciphertext) -> Vec<u8> {
    let params = ct.params();
    let mut out = Vec::with_capacity(HEADER_LEN + ciphertext_payload_len(params));
    write_header(&mut out, TYPE_CT, params);
    encode_elements(&mut out, ct.syndrome(), params.n());
    out
}

pub fn decode_ciphertext(bytes: &[u8]) -> Result<Ciphertext, CodecError> {
    let (params, payload) = parse_header(bytes, TYPE_CT)?;
    check_len(payload, ciphertext_payload_len(&params))?;
    let elems = decode_elements(payload, params.syndrome_len(), params.n())?;
    Ciphertext::new(params, elems).map_err(CodecError::InvalidParameters)
}

pub fn encode_plaintext(pt: &Plaintext, params: &ParameterSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + plaintext_payload_len(params));
    write_header(&mut out, TYPE_PT, params);
    out.extend_from_slice(&pt.matrix().to_bytes());
    out
}

pub fn decode_plaintext(bytes: &[u8]) -> Result<(Plaintext, ParameterSet), CodecError> {
    let (params, payload) = parse_header(bytes, TYPE_PT)?;
    check_len(payload, plaintext_payload_len(&params))?;
    let matrix =
        BitMatrix::from_bytes(params.n(), params.n(), payload).ok_or(CodecError::NonCanonical)?;
    let pt = Plaintext::new(matrix, &params).map_err(CodecError::InvalidParameters)?;
    Ok((pt, params))
}
