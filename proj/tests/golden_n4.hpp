#pragma once

// Reference 5x5 projector and POVM matrices for the N=4, K=2 decoder on the
// vacuum + single-photon subspace. Alpha-independent.

#include <Eigen/Dense>

namespace golden {

inline Eigen::MatrixXd pi_000() {
    Eigen::MatrixXd m(5, 5);
    m << 1, 0, 0, 0, 0,
         0, 0.75, 0.25, -0.25, 0.25,
         0, 0.25, 0.75, 0.25, -0.25,
         0, -0.25, 0.25, 0.75, 0.25,
         0, 0.25, -0.25, 0.25, 0.75;
    return m;
}

inline Eigen::MatrixXd pi_001() {
    Eigen::MatrixXd m(5, 5);
    m << 0, 0, 0, 0, 0,
         0, 0.25, -0.25, 0.25, -0.25,
         0, -0.25, 0.25, -0.25, 0.25,
         0, 0.25, -0.25, 0.25, -0.25,
         0, -0.25, 0.25, -0.25, 0.25;
    return m;
}

inline Eigen::MatrixXd pi_0000() {
    Eigen::MatrixXd m(5, 5);
    m << 0.5, 0.25, 0.25, 0.25, 0.25,
         0.25, 0.875, -0.125, -0.125, -0.125,
         0.25, -0.125, 0.875, -0.125, -0.125,
         0.25, -0.125, -0.125, 0.875, -0.125,
         0.25, -0.125, -0.125, -0.125, 0.875;
    return m;
}

inline Eigen::MatrixXd pi_0001() {
    Eigen::MatrixXd m(5, 5);
    m << 0.5, -0.25, -0.25, -0.25, -0.25,
         -0.25, 0.125, 0.125, 0.125, 0.125,
         -0.25, 0.125, 0.125, 0.125, 0.125,
         -0.25, 0.125, 0.125, 0.125, 0.125,
         -0.25, 0.125, 0.125, 0.125, 0.125;
    return m;
}

inline Eigen::MatrixXd pi_0010() {
    Eigen::MatrixXd m(5, 5);
    m << 0.5, -0.25, 0.25, -0.25, 0.25,
         -0.25, 0.875, 0.125, -0.125, 0.125,
         0.25, 0.125, 0.875, 0.125, -0.125,
         -0.25, -0.125, 0.125, 0.875, 0.125,
         0.25, 0.125, -0.125, 0.125, 0.875;
    return m;
}

inline Eigen::MatrixXd pi_0011() {
    Eigen::MatrixXd m(5, 5);
    m << 0.5, 0.25, -0.25, 0.25, -0.25,
         0.25, 0.125, -0.125, 0.125, -0.125,
         -0.25, -0.125, 0.125, -0.125, 0.125,
         0.25, 0.125, -0.125, 0.125, -0.125,
         -0.25, -0.125, 0.125, -0.125, 0.125;
    return m;
}

inline Eigen::MatrixXd lambda_0000() {
    Eigen::MatrixXd m(5, 5);
    m << 0.5, 0.25, 0.25, 0.25, 0.25,
         0.25, 0.625, 0.125, -0.375, 0.125,
         0.25, 0.125, 0.625, 0.125, -0.375,
         0.25, -0.375, 0.125, 0.625, 0.125,
         0.25, 0.125, -0.375, 0.125, 0.625;
    return m;
}

inline Eigen::MatrixXd lambda_0001() {
    Eigen::MatrixXd m(5, 5);
    m << 0.5, -0.25, -0.25, -0.25, -0.25,
         -0.25, 0.125, 0.125, 0.125, 0.125,
         -0.25, 0.125, 0.125, 0.125, 0.125,
         -0.25, 0.125, 0.125, 0.125, 0.125,
         -0.25, 0.125, 0.125, 0.125, 0.125;
    return m;
}

inline Eigen::MatrixXd lambda_0010() {
    Eigen::MatrixXd m(5, 5);
    m << 0, 0, 0, 0, 0,
         0, 0.125, -0.125, 0.125, -0.125,
         0, -0.125, 0.125, -0.125, 0.125,
         0, 0.125, -0.125, 0.125, -0.125,
         0, -0.125, 0.125, -0.125, 0.125;
    return m;
}

}  // namespace golden
