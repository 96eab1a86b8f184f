#ifndef XLTPROJECT_CORPUS_HPP
#define XLTPROJECT_CORPUS_HPP

#include "xltproject/bio.hpp"
#include "xltproject/conll.hpp"
#include "xltproject/error.hpp"
#include "xltproject/logits.hpp"
#include "xltproject/pharaoh.hpp"
#include "xltproject/types.hpp"

#endif // XLTPROJECT_CORPUS_HPP
