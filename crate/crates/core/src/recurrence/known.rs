//! The three recurrences satisfied by `â`, `v̂` and `d̂`.

use rug::Rational;

use super::PRecurrence;

/// Annihilates `â_n`.
pub fn area() -> PRecurrence {
    PRecurrence::from_integers(&[
        &[-84, -136, -81, -21, -2],
        &[399, 730, 484, 137, 14],
        &[-474, -835, -529, -143, -14],
        &[54, 99, 66, 19, 2],
    ])
    .expect("static matrix")
}

/// Annihilates `v̂_n`.
pub fn volume() -> PRecurrence {
    PRecurrence::from_integers(&[
        &[-252, -303, -136, -27, -2],
        &[960, 1384, 730, 167, 14],
        &[-1008, -1436, -748, -169, -14],
        &[90, 141, 82, 21, 2],
    ])
    .expect("static matrix")
}

const DSEQ: [[&str; 8]; 8] = [
    [
        "-1630207404/1529",
        "-3176073675/3058",
        "-660587685/1529",
        "-1216898711/12232",
        "-167529251/12232",
        "-626799/556",
        "-7141/139",
        "-1",
    ],
    [
        "18219511026/1529",
        "6798395835/556",
        "16328931207/3058",
        "15735207287/12232",
        "2258693435/12232",
        "8782801/556",
        "103675/139",
        "15",
    ],
    [
        "-80949464718/1529",
        "-338705850511/6116",
        "-150907466733/6116",
        "-74228837833/12232",
        "-10882115811/12232",
        "-43223443/556",
        "-521157/139",
        "-77",
    ],
    [
        "347623458975/3058",
        "32991350565/278",
        "322759355227/6116",
        "158457515673/12232",
        "23184921987/12232",
        "91902509/556",
        "1105723/139",
        "163",
    ],
    [
        "-368052969807/3058",
        "-190572156372/1529",
        "-168114763631/3058",
        "-163720428321/12232",
        "-23758375953/12232",
        "-93404429/556",
        "-1114663/139",
        "-163",
    ],
    [
        "177327816597/3058",
        "366011927673/6116",
        "40230202855/1529",
        "78121412337/12232",
        "11304865929/12232",
        "44328883/556",
        "527737/139",
        "77",
    ],
    [
        "-29809040325/3058",
        "-62775138251/6116",
        "-28175845633/6116",
        "-13970430847/12232",
        "-2065443305/12232",
        "-8275441/556",
        "-100655/139",
        "-15",
    ],
    [
        "818331696/1529",
        "880217988/1529",
        "1617383067/6116",
        "822460415/12232",
        "124982969/12232",
        "515919/556",
        "6481/139",
        "1",
    ],
];

/// Annihilates `d̂_n`, as printed (rational entries, monic top column).
pub fn dseq() -> PRecurrence {
    let coeffs =
        DSEQ.iter().map(|row| row.iter().map(|s| s.parse::<Rational>().expect("static entry")).collect()).collect();
    PRecurrence::new(coeffs).expect("static matrix")
}
