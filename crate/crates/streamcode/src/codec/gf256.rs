//! Table-driven GF(256) arithmetic, reduction polynomial 0x11d.

const POLY: u16 = 0x11d;

/// exp is doubled so `exp[log a + log b]` needs no reduction mod 255.
const fn build_tables() -> ([u8; 512], [u8; 256]) {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut x: u16 = 1;
    let mut i = 0;
    while i < 255 {
        exp[i] = x as u8;
        log[x as usize] = i as u8;
        x <<= 1;
        if x & 0x100 != 0 {
            x ^= POLY;
        }
        i += 1;
    }
    let mut j = 255;
    while j < 512 {
        exp[j] = exp[j - 255];
        j += 1;
    }
    (exp, log)
}

static TABLES: ([u8; 512], [u8; 256]) = build_tables();

pub(crate) fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        return 0;
    }
    let (exp, log) = (&TABLES.0, &TABLES.1);
    exp[log[a as usize] as usize + log[b as usize] as usize]
}

pub(crate) fn inv(a: u8) -> u8 {
    assert_ne!(a, 0, "zero has no inverse");
    let (exp, log) = (&TABLES.0, &TABLES.1);
    exp[255 - log[a as usize] as usize]
}
