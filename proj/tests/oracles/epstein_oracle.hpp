#pragma once

// Generated by gen_oracles.py (mpmath, 40 digits). Do not edit.

namespace oracle {

struct EValue {
    double sigma, t;
    double e1_re, e1_im, e2_re, e2_im;  // x^2+5y^2, 2x^2+2xy+3y^2
    double l0_re, l0_im, l1_re, l1_im;  // L(s, chi_0), L(s, chi_1) of D = -20
};

inline constexpr EValue kValues[] = {
    {2.0, 0.0, 2.502422241348656897877722, 0.0, 1.208691546145584371647705, 0.0, 1.855556893747120634762713, 0.0, 0.6468653476015362631150082, 0.0},
    {1.5, 3.0, 2.132657582386016641191636, 0.4863154849539880098340232, -0.8573478664971791388765892, -0.5528899981268573474734802, 0.6376548579444187511575233, -0.0332872565864346688197285, 1.495002724441597890034112, 0.5196027415404226786537517},
    {3.0, -7.5, 2.002652787836069493452083, -0.02438964139635222192616938, 0.05387351631373506556900306, -0.07425016773411321565669759, 1.028263152074902279510543, -0.04931990456523271879143349, 0.97438963576116721394154, 0.0249302631688804968652641},
    {0.5, 14.0, 6.77589555970689885300073, 5.258037658278814488354319, -6.929338479706674644940103, -5.377108066706122693218245, -0.07672145999988789596968677, -0.05953520421365410243196286, 6.852617019706786748970417, 5.317572862492468590786282},
    {0.75, 25.0, 1.598751375629323335475828, -0.0573480744561527113694946, -1.290061426659410741643453, 0.2012546365968013409162265, 0.1543449744849562969161877, 0.07195328107032431477336595, 1.444406401144367038559641, -0.1293013555264770261428605},
    {0.25, 40.0, 8.939910024165211408221511, 6.312543583693927697701158, -1.135905055760927624701656, 4.214002387552355951418334, 3.902002484202141891759927, 5.263272985623141824559746, 5.037907539963069516461584, 1.049270598070785873141412},
    {-0.5, 10.0, 93.32727658451689395834715, -29.10328746856797768936303, 32.55543697152491749894835, -18.16397108909959154929832, 62.94135677802090572864775, -23.63362927883378461933068, 30.3859198064959882296994, -5.469658189734193070032357},
    {-1.0, 2.0, -5.735520966142406306087868, -2.488029632679730187181407, 1.779378403399874334263244, -2.035965699671112742867522, -1.978071281371265985912312, -2.261997666175421465024464, -3.757449684771140320175556, -0.2260319665043087221569426},
    {0.9, 60.0, 2.299006095956210511497051, -2.971515040789841131945049, -1.729005518418583341465738, 3.14634169585402824631118, 0.2850002887688135850156565, 0.08741332753209355718306542, 2.014005807187396926481394, -3.058928368321934689128114},
    {1.3, 100.0, 2.05060676786671353759189, 0.08267925662208915656636552, 0.2825263680857884503269543, -0.1867259908250575733778114, 1.166566567976250993959422, -0.05202336710148420840572296, 0.884040199890462543632468, 0.1347026237235733649720885},
    {0.6, 150.0, 2.454157501905013906382792, -1.363872763802126650421409, -2.399474944117988863660501, 1.245450927254164628085993, 0.0273412788935125213611457, -0.05921091827398101116770816, 2.426816223011501385021646, -1.304661845528145639253701},
    {2.5, 33.3, 1.879562950944988541097091, -0.0250600719264606609108953, -0.05395266183325055216589559, 0.4962380257413502169622239, 0.9128051445558689944655977, 0.2355889769074447780256643, 0.9667578063891195466314933, -0.2606490488339054389365596},
    {0.0, 5.0, -3.784659193365131663047608, -4.647478975309703449822499, -1.419593839863042822953995, 5.72896820915705994132492, -2.602126516614087243000802, 0.5407446169236782457512107, -1.182532676751044420046806, -5.188223592233381695573709},
    {1.1, 0.5, 1.284684440690624954934311, -2.485134347810811577860766, 0.5141857111215576428442279, -2.848283277481266594776913, 0.8994350759060912988892693, -2.666708812646039086318839, 0.3852493647845336560450413, 0.1815744648352275084580736},
    {0.5, 200.0, 29.31263685069120756860791, 0.5820198913491952841400545, 29.79948291998355437203999, 0.5916865104867578894931794, 29.55605988533738097032395, 0.586853200917976586816617, -0.2434230346461734017160408, -0.004833309568781302676562429},
    {4.0, 1.0, 1.999888144492829392954611, -0.01468595126138183458860523, 0.1173080321686623433199847, -0.1261283044925473582240097, 1.058598088330745868137298, -0.07040712787696459640630747, 0.9412900561620835248173133, 0.05572117661558276181770224},
};

struct Zero {
    double re, im;
};

// zeros of E(s, x^2+5y^2)
inline constexpr Zero kZerosQ1[] = {
    {0.9329696974854141047628276, 15.66824953127847236239493},
    {0.06703030251458589523717243, 15.66824953127847236239493},
    {0.937666906700399378434207, 29.98339523515551666013778},
};

struct Special {
    double re, im, x;
    double f_re, f_im;
};

// K_nu(x) exp(pi |Im nu| / 2) at nu = re + i im
inline constexpr Special kBesselK[] = {
    {0.2999999999999999888977698, 5.0, 2.0, -1.042274057140158545522094, -0.1504198873398019808483663},
    {1.0, 20.0, 10.0, -0.969199144442222632029853, -0.4359862720645338517293957},
    {0.5, 0.0, 1.0, 0.4610685044478945584395759, 0.0},
    {2.5, 50.0, 30.0, 2.095754335653047427823882, -2.25517610770707923417872},
    {-0.25, 12.0, 0.7, 0.07892330632030926489229198, 0.738227946342793776482995},
    {0.0, 80.0, 150.0, 0.0000000000000000000009341146365669044615859144, 0.0},
};

// Gamma(z), x unused
inline constexpr Special kGamma[] = {
    {0.5, 10.0, 0, 0.0000003378724376234235797029511, 0.0000001689369839038918911205107},
    {3.0, 0.2000000000000000111022302, 0, 1.950508112899261240426197, 0.3645372998942830726638718},
    {-2.5, 1.0, 0, -0.04173662580789361374476014, -0.08636910736976348469418628},
    {1.5, -40.0, 0, -0.00000000000000000000000003447379525488220921885421, -0.00000000000000000000000003855508260781655741485748},
    {0.25, 0.0, 0, 3.625609908221908311930685, 0.0},
};

// zeta(z), x unused
inline constexpr Special kZeta[] = {
    {0.5, 30.0, 0, -0.1206422875900436999140211, -0.5836912147637062887576358},
    {-3.0, 2.0, 0, 0.02184972648046249871910009, 0.0471744372730894234126573},
    {2.0, 0.0, 0, 1.644934066848226436472415, 0.0},
    {1.5, 100.0, 0, 1.310259881673752173007731, -0.06726633522165320601424514},
    {0.9000000000000000222044605, 15.5, 0, 0.6482114588879117537456192, 0.7598430533284258059507687},
};

}  // namespace oracle
