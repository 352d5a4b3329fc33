#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace levy
{
    using Vec = Eigen::VectorXd;
    using Mat = Eigen::MatrixXd;
    using cplx = std::complex<double>;

    // surface area of the unit sphere in R^d
    double sphere_area(int d);

    // Raised when a model violates one of its structural conditions.
    struct model_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // A test whose premises do not hold for the given input.
    struct not_applicable : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Quadrature gave up before meeting its tolerance; carries the partial value.
    struct quadrature_error : std::runtime_error
    {
        quadrature_error(const std::string &what, double partial)
            : std::runtime_error(what), partial_value(partial) {}
        double partial_value;
    };
}
