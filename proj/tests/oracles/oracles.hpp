#pragma once

// Generated by tests/oracles/derive.py (mpmath, 40 digits). Do not edit by hand.

namespace flv::oracle {

inline constexpr double kCN2 = 8.0;
inline constexpr double kCN3 = 60.75;
inline constexpr double kCN4 = 606.81481481481481481;
inline constexpr double kUnitDisk = 3.1415926535897932385;
inline constexpr double kUnitBall3 = 4.1887902047863909846;
inline constexpr double kPNorm4GradComponent = 0.59460355750136053336;
inline constexpr double kEllipseDiag14Min = 1.0;
inline constexpr double kEllipseDiag14Max = 2.0;
inline constexpr double kDriftedMin = 0.5;
inline constexpr double kDriftedMax = 1.5;
inline constexpr double kDriftedDualHatPlusX = 2.0;
inline constexpr double kDriftedDualHatMinusX = 0.66666666666666666667;
inline constexpr double kEllipseDiag14DualAt02 = 1.0;
inline constexpr double kPNorm4DualAt11 = 1.6817928305074290861;
inline constexpr double kEllipseDiag14Area = 6.2831853071795864769;
inline constexpr double kEllipseDiag14WeightedPerimeter = 12.566370614359172954;
inline constexpr double kQuarterArc = 1.5707963267948966192;
inline constexpr double kU3AtUnitRadius = 2.0273255405408219099;
inline constexpr double kDudrN2AtOne = -2.0;
inline constexpr double kDensityN2At100 = 0.000000079984002399680039995;
inline constexpr double kLevelRadiusN2Log8Over81 = 2.8284271247461900976;
inline constexpr double kMassN2Plane = 25.132741228718345908;
inline constexpr double kMassN2Quadrant = 6.2831853071795864769;
inline constexpr double kMassN3Space = 254.46900494077325232;
inline constexpr double kMassN2Lambda7 = 25.132741228718345908;
inline constexpr double kFluxN2R1 = 12.566370614359172954;
inline constexpr double kFluxN2R01 = 0.24883902206651827631;
inline constexpr double kFluxN2R10 = 24.883902206651827631;
inline constexpr double kPohozaevN2R1Lhs = 12.566370614359172954;
inline constexpr double kPohozaevN2R1Rhs = 12.566370614359172954;
inline constexpr double kPohozaevN3R1Lhs = 95.425876852789969618;
inline constexpr double kPohozaevN3R1Rhs = 95.425876852789969618;
inline constexpr double kEllipsoid2Unit = 4.3417674288336397443;
inline constexpr double kEllipsoid2QuadrantUnit = 1.233150283477770587;
inline constexpr double kEllipsoid3Unit = 4.0503673611208376819;
inline constexpr double kPoincareFanRatio = 0.52704627669472988867;
inline constexpr double kPoincareBallRatioP1 = 0.375;
inline constexpr double kPoincareBallRatioP2 = 0.40824829046386301637;
inline constexpr double kPoincareBallRatioP4 = 0.44005586839669669864;

// 2x2 and 3x3 ellipsoid matrices the anisotropic values above refer to.
inline constexpr double kA2[2][2] = {{2.0, 0.3}, {0.3, 1.0}};
inline constexpr double kA3[3][3] = {{2.0, 0.3, 0.0}, {0.3, 1.0, 0.1}, {0.0, 0.1, 0.5}};

}  // namespace flv::oracle
