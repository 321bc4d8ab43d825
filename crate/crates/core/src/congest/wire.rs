//! Bit-level message encoding.
//!
//! Programs describe their messages as typed values implementing [`Wire`];
//! the engine encodes every send into a [`Message`] bit string, charges its
//! length against the per-edge budget, and decodes it at the receiver.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WireError {
    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u64, width: u32 },
    #[error("message truncated: wanted {wanted} bits at offset {offset}, length {len}")]
    Truncated { wanted: u32, offset: u32, len: u32 },
    #[error("unknown message tag {0}")]
    BadTag(u64),
    #[error("{0} trailing bits after decoding")]
    Trailing(u32),
}

/// Field widths shared by every node of one run, derived from `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireFormat {
    /// Bits needed for a node ID, `max(1, ceil(log2 n))`.
    pub id_bits: u32,
    /// Per-edge, per-round budget `kappa * id_bits`.
    pub budget: u32,
}

/// `ceil(log2 x)` for `x >= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        u64::BITS - (x - 1).leading_zeros()
    }
}

/// Number of bits needed to represent every value in `0..=max`.
pub fn bits_for(max: u64) -> u32 {
    (u64::BITS - max.leading_zeros()).max(1)
}

impl WireFormat {
    pub fn new(node_count: usize, kappa: u32) -> Self {
        let id_bits = ceil_log2(node_count as u64).max(1);
        Self { id_bits, budget: kappa * id_bits }
    }

    /// Width of an aggregate value field: two node IDs' worth.
    pub fn value_bits(&self) -> u32 {
        2 * self.id_bits
    }

    pub fn max_value(&self) -> u64 {
        mask(self.value_bits())
    }
}

fn mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// An encoded message: an opaque bit string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Message {
    words: Vec<u64>,
    len: u32,
}

impl Message {
    /// Length in bits; an empty payload still occupies one bit on the wire.
    pub fn bit_len(&self) -> u32 {
        self.len.max(1)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

pub struct BitWriter {
    format: WireFormat,
    words: Vec<u64>,
    len: u32,
}

impl BitWriter {
    pub fn new(format: WireFormat) -> Self {
        Self { format, words: Vec::new(), len: 0 }
    }

    pub fn format(&self) -> WireFormat {
        self.format
    }

    pub fn put(&mut self, value: u64, width: u32) -> Result<(), WireError> {
        if width < 64 && value > mask(width) {
            return Err(WireError::Overflow { value, width });
        }
        for i in 0..width {
            let bit = (value >> i) & 1;
            let pos = self.len;
            if pos % 64 == 0 {
                self.words.push(0);
            }
            *self.words.last_mut().expect("word pushed above") |= bit << (pos % 64);
            self.len += 1;
        }
        Ok(())
    }

    pub fn put_bool(&mut self, b: bool) -> Result<(), WireError> {
        self.put(b as u64, 1)
    }

    pub fn put_id(&mut self, id: usize) -> Result<(), WireError> {
        self.put(id as u64, self.format.id_bits)
    }

    pub fn put_value(&mut self, v: u64) -> Result<(), WireError> {
        self.put(v, self.format.value_bits())
    }

    pub fn finish(self) -> Message {
        Message { words: self.words, len: self.len }
    }
}

pub struct BitReader<'a> {
    format: WireFormat,
    msg: &'a Message,
    pos: u32,
}

impl<'a> BitReader<'a> {
    pub fn new(format: WireFormat, msg: &'a Message) -> Self {
        Self { format, msg, pos: 0 }
    }

    pub fn format(&self) -> WireFormat {
        self.format
    }

    pub fn take(&mut self, width: u32) -> Result<u64, WireError> {
        if self.pos + width > self.msg.len {
            return Err(WireError::Truncated { wanted: width, offset: self.pos, len: self.msg.len });
        }
        let mut value = 0u64;
        for i in 0..width {
            let pos = self.pos + i;
            let bit = (self.msg.words[(pos / 64) as usize] >> (pos % 64)) & 1;
            value |= bit << i;
        }
        self.pos += width;
        Ok(value)
    }

    pub fn take_bool(&mut self) -> Result<bool, WireError> {
        Ok(self.take(1)? == 1)
    }

    pub fn take_id(&mut self) -> Result<usize, WireError> {
        Ok(self.take(self.format.id_bits)? as usize)
    }

    pub fn take_value(&mut self) -> Result<u64, WireError> {
        self.take(self.format.value_bits())
    }

    pub fn remaining(&self) -> u32 {
        self.msg.len - self.pos
    }
}

/// A typed message with an explicit bit-level encoding.
pub trait Wire: Sized {
    fn encode(&self, w: &mut BitWriter) -> Result<(), WireError>;
    fn decode(r: &mut BitReader<'_>) -> Result<Self, WireError>;
}

pub fn encode<M: Wire>(msg: &M, format: WireFormat) -> Result<Message, WireError> {
    let mut w = BitWriter::new(format);
    msg.encode(&mut w)?;
    Ok(w.finish())
}

pub fn decode<M: Wire>(msg: &Message, format: WireFormat) -> Result<M, WireError> {
    let mut r = BitReader::new(format, msg);
    let value = M::decode(&mut r)?;
    match r.remaining() {
        0 => Ok(value),
        extra => Err(WireError::Trailing(extra)),
    }
}

/// A bare signal; occupies a single bit.
impl Wire for () {
    fn encode(&self, _: &mut BitWriter) -> Result<(), WireError> {
        Ok(())
    }

    fn decode(_: &mut BitReader<'_>) -> Result<Self, WireError> {
        Ok(())
    }
}
