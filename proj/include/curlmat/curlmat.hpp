#ifndef CURLMAT_CURLMAT_HPP
#define CURLMAT_CURLMAT_HPP

#include "curlmat/exactnum.hpp"
#include "curlmat/angular.hpp"
#include "curlmat/diffop.hpp"
#include "curlmat/format.hpp"
#include "curlmat/builders.hpp"
#include "curlmat/identities.hpp"
#include "curlmat/spectral.hpp"
#include "curlmat/ctf_io.hpp"
#include "curlmat/evolve.hpp"

#endif // CURLMAT_CURLMAT_HPP
