pub const UNBIASED_VARY_G: [[f64; 10]; 10] = [
    [
        0.085872, 0.0, 0.270998, 0.0, 0.0, 0.29969, 0.436304, 0.0, 0.0, 0.454386,
    ],
    [
        0.0, 0.14456, 0.0, 0.173241, 0.382144, 0.0, 0.0, 0.406689, 0.424614, 0.0,
    ],
    [
        0.188254, 0.0, 0.439777, 0.0, 0.0, 0.313363, 0.32688, 0.0, 0.0, 0.03759,
    ],
    [
        0.0, 0.291976, 0.0, 0.272117, 0.457068, 0.0, 0.0, 0.226131, 0.123849, 0.0,
    ],
    [
        0.293962, 0.0, 0.461887, 0.0, 0.0, 0.116467, 0.0143253, 0.0, 0.0, 0.328976,
    ],
    [
        0.0, 0.412869, 0.0, 0.26795, 0.274358, 0.0, 0.0, 0.13769, 0.210023, 0.0,
    ],
    [
        0.378705, 0.0, 0.329382, 0.0, 0.0, 0.140276, 0.259821, 0.0, 0.0, 0.255201,
    ],
    [
        0.0, 0.469615, 0.0, 0.160232, 0.0225654, 0.0, 0.0, 0.330362, 0.219467, 0.0,
    ],
    [
        0.427926, 0.0, 0.103675, 0.0, 0.0, 0.298293, 0.243356, 0.0, 0.0, 0.0772449,
    ],
    [
        0.0, 0.452834, 0.0, 0.00271208, 0.251535, 0.0, 0.0, 0.236954, 0.0154019, 0.0,
    ],
];

pub const BIASED_VARY_G: [[f64; 10]; 10] = [
    [
        0.102807, 0.165425, 0.18125, 0.204599, 0.28147, 0.231363, 0.340805, 0.354332, 0.24836,
        0.325739,
    ],
    [
        0.160805, 0.150032, 0.263796, 0.266683, 0.0713559, 0.0114136, 0.357451, 0.200113, 0.192774,
        0.188331,
    ],
    [
        0.14731, 0.250945, 0.123814, 0.0842062, 0.355356, 0.242037, 0.0532981, 0.290481, 0.118781,
        0.319978,
    ],
    [
        0.247986, 0.119294, 0.321285, 0.25689, 0.130891, 0.152198, 0.178257, 0.333624, 0.00977145,
        0.115952,
    ],
    [
        0.214312, 0.336138, 0.0412139, 0.0397512, 0.313538, 0.122879, 0.287124, 0.00929818,
        0.182471, 0.249432,
    ],
    [
        0.314164, 0.0217168, 0.294536, 0.148904, 0.292471, 0.15421, 0.0567743, 0.126906, 0.138425,
        0.16277,
    ],
    [
        0.253239, 0.351607, 0.0978355, 0.157374, 0.151457, 0.0427969, 0.30267, 0.176537, 0.0202042,
        0.105306,
    ],
    [
        0.348607,
        0.109879,
        0.206735,
        0.00525292,
        0.315546,
        0.01923,
        0.179177,
        0.164169,
        0.10805,
        0.000722655,
    ],
    [
        0.256235, 0.301374, 0.23521, 0.195111, 0.0254403, 0.140025, 0.111149, 0.143323, 0.172429,
        0.271095,
    ],
    [
        0.350104, 0.234847, 0.097638, 0.112868, 0.193846, 0.149183, 0.147824, 0.269674, 0.00748982,
        0.13179,
    ],
];

pub const BIASED_VARY_DELTA: [[f64; 10]; 10] = [
    [
        0.96738, 0.199033, 0.0915272, 0.0903519, 0.0648127, 0.05268, 0.0232236, 0.0121967,
        0.0168617, 0.0047086,
    ],
    [
        0.175533, 0.966042, 0.0328179, 0.151747, 0.0015081, 0.0538998, 0.0636757, 0.0246696,
        0.0582072, 0.0190485,
    ],
    [
        0.0216759, 0.0541826, 0.813775, 0.55671, 0.0071516, 0.115413, 0.0358231, 0.0618321,
        0.0311963, 0.0239472,
    ],
    [
        0.156636, 0.119545, 0.557076, 0.803544, 0.047923, 0.00235764, 0.0423296, 0.012997,
        0.0160923, 0.00222915,
    ],
    [
        0.0303449,
        0.0312773,
        0.000140632,
        0.0550665,
        0.914144,
        0.37283,
        0.0118446,
        0.06253,
        0.0853124,
        0.0614312,
    ],
    [
        0.018286, 0.0309794, 0.0152981, 0.061755, 0.0130238, 0.0492092, 0.949661, 0.0243169,
        0.265606, 0.0830394,
    ],
    [
        0.077898, 0.042829, 0.114335, 0.0312155, 0.376124, 0.910667, 0.0468325, 0.0451187,
        0.018187, 0.00643401,
    ],
    [
        0.0129774, 0.0160855, 0.0304578, 0.0233544, 0.0480622, 0.0628637, 0.0235812, 0.966699,
        0.0394558, 0.0329615,
    ],
    [
        0.0264194, 0.0680246, 0.036279, 0.0161135, 0.0891112, 0.00691535, 0.264711, 0.036906,
        0.952123, 0.00493437,
    ],
    [
        0.00783376, 0.0225809, 0.016727, 0.00598152, 0.0443078, 0.0125345, 0.0860162, 0.0332038,
        0.0115349, 0.976888,
    ],
];
