// onebit: channel estimation for massive MIMO uplinks with one-bit ADCs
// Copyright (C) 2026 The onebit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "onebit/linalg.hpp"

#include <algorithm>

namespace onebit
{
    double min_eigenvalue(const CMatrix &X)
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(X, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    double max_eigenvalue(const CMatrix &X)
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(X, Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff();
    }

    CMatrix hermitian_sqrt(const CMatrix &X)
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(X);
        if (es.eigenvalues().minCoeff() > 1e-10)
        {
            Eigen::LLT<CMatrix> llt(X);
            if (llt.info() == Eigen::Success)
                return CMatrix(llt.matrixL());
        }
        RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return es.eigenvectors() * root.asDiagonal();
    }

    CMatrix pseudo_inverse(const CMatrix &X, double rel_tol, Eigen::Index *rank)
    {
        Eigen::JacobiSVD<CMatrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const RVector &s = svd.singularValues();
        double cutoff = s.size() > 0 ? rel_tol * s.maxCoeff() : 0.0;

        RVector inv = RVector::Zero(s.size());
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
        {
            if (s[i] > cutoff && s[i] > 0.0)
            {
                inv[i] = 1.0 / s[i];
                ++r;
            }
        }
        if (rank)
            *rank = r;
        return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    }
}
