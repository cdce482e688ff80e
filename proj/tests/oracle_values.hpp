#pragma once

// Generated by tests/oracles/make_oracles.py (mpmath, 50 digits).

namespace oracle {

inline constexpr double kLogGamma0 = 1.0957979948180755217;
inline constexpr double kLogGamma1 = 11.512919692895825707;
inline constexpr double kLogGamma2 = 7.5343642367587329552;
inline constexpr double kLogGamma3 = 469.60554712992946873;
inline constexpr double kPoch_half_7 = 1055.7421875;
inline constexpr double kRegP_half_2 = 0.9544997361036415856;
inline constexpr double kRegQ_2p5_10 = 0.0012497305630313754119;
inline constexpr double kRegQ_30_45 = 0.0073371992977965036286;
inline constexpr double kRegP_0p1_1em3 = 0.52676856839244512968;
inline constexpr double kTau_005_a1 = 2.9957322735539909934;
inline constexpr double kTau_005_ahalf = 1.9207294103470629792;
inline constexpr double kTau_1em8_a0p3 = 15.370086915135737997;
inline constexpr double kTau_05_a5 = 4.6709088827959837203;
inline constexpr double kPoissonSf_5_3 = 0.08391794203130344918;
inline constexpr double kNbPmf_4_2_half = 0.078125;
inline constexpr double kNbSf_6_2_half = 0.03515625;
inline constexpr double kGammaRatio_50 = 0.01980198019801980198;
inline constexpr long long kPoissonX0_005_3 = 5;
inline constexpr long long kPoissonX0_001_10 = 17;
inline constexpr long long kNbX0_005_2_half = 5;
inline constexpr double kLaguerre_5_half_2p5 = 1.1770833333333333333;
inline constexpr double kLaguerre_50_half_30 = 218634.59917224101936;
inline constexpr double kLaguerre_200_mhalf_10 = 1.3146069170400236701;
inline constexpr double kLogAbsLaguerre_1000_0_500 = 244.08721590427097216;
inline constexpr int kSignLaguerre_1000_0_500 = 1;
inline constexpr double kCharlier_10_3_7 = -0.75435409404758267432;
inline constexpr double kCharlier_60_5_2 = 1.2108696514307258327e-18;
inline constexpr double kMeixner_12_2_half_9 = -2.3661430245232429736;
inline constexpr double kMeixner_40_0p7_0p3_15 = 576.04950124004017285;
inline constexpr double kGammaBasis_7_half_1p3 = 0.87126209300868991519;
inline constexpr double kKappaGamma_a1_r0p5 = 0.013394481944230505791;
inline constexpr double kKappaGamma_a1_r0p9 = 0.032092767082398280797;
inline constexpr double kKappaGamma_ahalf_r0p3 = 0.0081825149546615904491;
inline constexpr double kKappaGamma_a0p3_r0p7 = 0.022678934936296832424;
inline constexpr double kKappaGamma_a1_r0p5_t001 = 0.0020312629269130403015;
inline constexpr double kKappaPoisson_a3_r0p4 = 0.015687105027081008242;
inline constexpr double kKappaPoisson_a10_r0p8 = 0.040211191003180015076;
inline constexpr double kKappaNb_b2_chalf_r0p3 = 0.0090515497701912774177;
inline constexpr double kKappaNb_b0p8_c0p6_r0p5 = 0.015505731634748997514;
inline constexpr double kKappaGnb_a1_chalf_r0p4 = 0.011792276164629184249;
inline constexpr double kKappaGnb_ahalf_c0p6_r0p6 = 0.023994484168984389235;

}  // namespace oracle
