// Generated orbit parameters for the Lebedev–Laikov rules (octahedral orbits).
// Columns: orbit kind, a, b, weight (unit-sum normalization).
// Rules with negative weights (74, 230, 266 points) are omitted.

pub(super) struct Orbit {
    pub kind: u8,
    pub a: f64,
    pub b: f64,
    pub v: f64,
}

pub(super) struct RuleTable {
    pub points: usize,
    pub degree: usize,
    pub orbits: &'static [Orbit],
}

macro_rules! orbit {
    ($k:expr, $a:expr, $b:expr, $v:expr) => {
        Orbit { kind: $k, a: $a, b: $b, v: $v }
    };
}

pub(super) static TABLES: &[RuleTable] = &[
    RuleTable { points: 6, degree: 3, orbits: &[orbit!(1, 0.0, 0.0, 0.1666666666666667)] },
    RuleTable {
        points: 14,
        degree: 5,
        orbits: &[orbit!(1, 0.0, 0.0, 0.06666666666666667), orbit!(3, 0.0, 0.0, 0.075)],
    },
    RuleTable {
        points: 26,
        degree: 7,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.04761904761904762),
            orbit!(2, 0.0, 0.0, 0.0380952380952381),
            orbit!(3, 0.0, 0.0, 0.03214285714285714),
        ],
    },
    RuleTable {
        points: 38,
        degree: 9,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.009523809523809525),
            orbit!(3, 0.0, 0.0, 0.03214285714285714),
            orbit!(5, 0.4597008433809831, 0.0, 0.02857142857142857),
        ],
    },
    RuleTable {
        points: 50,
        degree: 11,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.0126984126984127),
            orbit!(2, 0.0, 0.0, 0.02257495590828924),
            orbit!(3, 0.0, 0.0, 0.02109375),
            orbit!(4, 0.3015113445777636, 0.0, 0.02017333553791887),
        ],
    },
    RuleTable {
        points: 86,
        degree: 15,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.01154401154401154),
            orbit!(3, 0.0, 0.0, 0.01194390908585628),
            orbit!(4, 0.3696028464541502, 0.0, 0.0111105557106034),
            orbit!(4, 0.6943540066026664, 0.0, 0.01187650129453714),
            orbit!(5, 0.3742430390903412, 0.0, 0.01181230374690448),
        ],
    },
    RuleTable {
        points: 110,
        degree: 17,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.003828270494937162),
            orbit!(3, 0.0, 0.0, 0.009793737512487513),
            orbit!(4, 0.1851156353447362, 0.0, 0.008211737283191111),
            orbit!(4, 0.6904210483822922, 0.0, 0.009942814891178103),
            orbit!(4, 0.3956894730559419, 0.0, 0.009595471336070962),
            orbit!(5, 0.4783690288121502, 0.0, 0.009694996361663029),
        ],
    },
    RuleTable {
        points: 146,
        degree: 19,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.0005996313688621381),
            orbit!(2, 0.0, 0.0, 0.007372999718620756),
            orbit!(3, 0.0, 0.0, 0.007210515360144488),
            orbit!(4, 0.6764410400114264, 0.0, 0.007116355493117555),
            orbit!(4, 0.4174961227965453, 0.0, 0.006753829486314477),
            orbit!(4, 0.1574676672039082, 0.0, 0.007574394159054034),
            orbit!(6, 0.1403553811713183, 0.4493328323269557, 0.006991087353303262),
        ],
    },
    RuleTable {
        points: 170,
        degree: 21,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.005544842902037365),
            orbit!(2, 0.0, 0.0, 0.006071332770670752),
            orbit!(3, 0.0, 0.0, 0.006383674773515093),
            orbit!(4, 0.2551252621114134, 0.0, 0.00518338758774779),
            orbit!(4, 0.6743601460362766, 0.0, 0.006317929009813725),
            orbit!(4, 0.431891069671941, 0.0, 0.006201670006589077),
            orbit!(5, 0.2613931360335988, 0.0, 0.005477143385137348),
            orbit!(6, 0.4990453161796037, 0.1446630744325115, 0.005968383987681156),
        ],
    },
    RuleTable {
        points: 194,
        degree: 23,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.001782340447244611),
            orbit!(2, 0.0, 0.0, 0.005716905949977102),
            orbit!(3, 0.0, 0.0, 0.005573383178848738),
            orbit!(4, 0.6712973442695226, 0.0, 0.005608704082587997),
            orbit!(4, 0.2892465627575439, 0.0, 0.005158237711805383),
            orbit!(4, 0.4446933178717437, 0.0, 0.005518771467273614),
            orbit!(4, 0.1299335447650067, 0.0, 0.004106777028169394),
            orbit!(5, 0.3457702197611283, 0.0, 0.005051846064614808),
            orbit!(6, 0.159041710538353, 0.8360360154824589, 0.005530248916233094),
        ],
    },
    RuleTable {
        points: 302,
        degree: 29,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.0008545911725128148),
            orbit!(3, 0.0, 0.0, 0.003599119285025571),
            orbit!(4, 0.3515640345570105, 0.0, 0.003449788424305883),
            orbit!(4, 0.6566329410219612, 0.0, 0.003604822601419882),
            orbit!(4, 0.4729054132581005, 0.0, 0.003576729661743367),
            orbit!(4, 0.09618308522614784, 0.0, 0.002352101413689164),
            orbit!(4, 0.2219645236294178, 0.0, 0.003108953122413675),
            orbit!(4, 0.7011766416089545, 0.0, 0.003650045807677255),
            orbit!(5, 0.2644152887060663, 0.0, 0.002982344963171804),
            orbit!(5, 0.5718955891878961, 0.0, 0.00360082093221646),
            orbit!(6, 0.2510034751770465, 0.8000727494073951, 0.003571540554273387),
            orbit!(6, 0.1233548532583327, 0.4127724083168531, 0.00339231220500617),
        ],
    },
    RuleTable {
        points: 350,
        degree: 31,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.003006796749453936),
            orbit!(3, 0.0, 0.0, 0.003050627745650771),
            orbit!(4, 0.7068965463912316, 0.0, 0.001621104600288991),
            orbit!(4, 0.4794682625712025, 0.0, 0.003005701484901752),
            orbit!(4, 0.1927533154878019, 0.0, 0.002990992529653774),
            orbit!(4, 0.6930357961327123, 0.0, 0.002982170644107595),
            orbit!(4, 0.3608302115520091, 0.0, 0.002721564237310992),
            orbit!(4, 0.6498486161496169, 0.0, 0.003033513795811141),
            orbit!(5, 0.1932945013230339, 0.0, 0.003007949555218533),
            orbit!(5, 0.3800494919899303, 0.0, 0.002881964603055307),
            orbit!(6, 0.2899558825499574, 0.7934537856582315, 0.002958357626535696),
            orbit!(6, 0.09684121455103957, 0.8280801506686862, 0.003036020026407088),
            orbit!(6, 0.1833434647041659, 0.9074658265305127, 0.002832187403926303),
        ],
    },
    RuleTable {
        points: 434,
        degree: 35,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.0005265897968224436),
            orbit!(2, 0.0, 0.0, 0.002548219972002607),
            orbit!(3, 0.0, 0.0, 0.002512317418927307),
            orbit!(4, 0.6909346307509111, 0.0, 0.002530403801186355),
            orbit!(4, 0.1774836054609158, 0.0, 0.002014279020918528),
            orbit!(4, 0.4914342637784746, 0.0, 0.002501725168402936),
            orbit!(4, 0.6456664707424256, 0.0, 0.002513267174597564),
            orbit!(4, 0.2861289010307638, 0.0, 0.002302694782227416),
            orbit!(4, 0.07568084367178018, 0.0, 0.001462495621594614),
            orbit!(4, 0.3927259763368002, 0.0, 0.00244537343731298),
            orbit!(5, 0.8818132877794288, 0.0, 0.002417442375638981),
            orbit!(5, 0.9776428111182649, 0.0, 0.001910951282179532),
            orbit!(6, 0.2054823696403044, 0.8689460322872412, 0.002416930044324775),
            orbit!(6, 0.5905157048925271, 0.7999278543857286, 0.002512236854563495),
            orbit!(6, 0.5550152361076807, 0.7717462626915901, 0.002496644054553086),
            orbit!(6, 0.9371809858553722, 0.3344363145343455, 0.002236607760437849),
        ],
    },
    RuleTable {
        points: 590,
        degree: 41,
        orbits: &[
            orbit!(1, 0.0, 0.0, 0.0003095121295306187),
            orbit!(3, 0.0, 0.0, 0.001852379698597489),
            orbit!(4, 0.7040954938227469, 0.0, 0.001871790639277744),
            orbit!(4, 0.6807744066455244, 0.0, 0.001858812585438317),
            orbit!(4, 0.6372546939258752, 0.0, 0.001852028828296213),
            orbit!(4, 0.5044419707800358, 0.0, 0.001846715956151242),
            orbit!(4, 0.4215761784010967, 0.0, 0.001818471778162769),
            orbit!(4, 0.3317920736472123, 0.0, 0.001749564657281154),
            orbit!(4, 0.2384736701421887, 0.0, 0.001617210647254411),
            orbit!(4, 0.1459036449157763, 0.0, 0.001384737234851692),
            orbit!(4, 0.06095034115507196, 0.0, 0.000976433116505105),
            orbit!(5, 0.6116843442009876, 0.0, 0.001857161196774078),
            orbit!(5, 0.3964755348199858, 0.0, 0.001705153996395864),
            orbit!(5, 0.1724782009907724, 0.0, 0.001300321685886048),
            orbit!(6, 0.561026380862206, 0.3518280927733519, 0.001842866472905286),
            orbit!(6, 0.474239284255198, 0.263471665593795, 0.001802658934377451),
            orbit!(6, 0.598412649788538, 0.1816640840360209, 0.00184983056044366),
            orbit!(6, 0.3791035407695563, 0.1720795225656878, 0.001713904507106709),
            orbit!(6, 0.2778673190586244, 0.08213021581932511, 0.001555213603396808),
            orbit!(6, 0.5033564271075117, 0.08999205842074876, 0.001802239128008525),
        ],
    },
];
