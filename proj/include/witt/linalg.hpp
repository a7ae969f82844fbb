#pragma once

// Exact sparse linear algebra over Q(i): incremental row echelon form,
// reduced echelon form and nullspace bases.

#include "witt/exactnum.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace witt {

/// Sparse vector, entries sorted by column, no zeros.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

inline SparseVec to_sparse(const std::map<std::size_t, Scalar> &m)
{
	SparseVec v;
	v.reserve(m.size());
	for (auto &[c, x] : m)
		if (!x.is_zero())
			v.emplace_back(c, x);
	return v;
}

inline Scalar dot(const SparseVec &a, const SparseVec &b)
{
	Scalar s;
	std::size_t p = 0, q = 0;
	while (p < a.size() && q < b.size())
	{
		if (a[p].first < b[q].first)
			++p;
		else if (b[q].first < a[p].first)
			++q;
		else
		{
			s += a[p].second * b[q].second;
			++p;
			++q;
		}
	}
	return s;
}

/**
 * Echelon: rows are inserted one at a time and reduced against the current
 * pivots in ascending column order; nonzero remainders become new monic pivot
 * rows. Pivot choice depends only on the column order, so the final reduced
 * echelon form (which is unique) and the derived nullspace basis are
 * reproducible.
 */
class Echelon
{
public:
	explicit Echelon(std::size_t columns = 0) : columns_(columns) {}

	std::size_t columns() const { return columns_; }
	std::size_t rank() const { return pivots_.size(); }

	/// Reduces `row`; returns true if it was independent of the rows seen so far.
	bool insert(const SparseVec &row)
	{
		std::map<std::size_t, Scalar> work;
		for (auto &[c, x] : row)
			if (!x.is_zero())
				work[c] += x;
		reduce(work);
		if (work.empty())
			return false;
		Scalar lead_inv = work.begin()->second.inverse();
		SparseVec r;
		r.reserve(work.size());
		for (auto &[c, x] : work)
			r.emplace_back(c, c == work.begin()->first ? Scalar(1) : x * lead_inv);
		std::size_t col = r.front().first;
		pivot_of_.emplace(col, rows_.size());
		pivots_.push_back(col);
		rows_.push_back(std::move(r));
		reduced_ = false;
		return true;
	}

	/// True if `row` lies in the span of the inserted rows.
	bool in_span(const SparseVec &row) const
	{
		std::map<std::size_t, Scalar> work;
		for (auto &[c, x] : row)
			if (!x.is_zero())
				work[c] += x;
		reduce(work);
		return work.empty();
	}

	/// Rows of the reduced echelon form, ordered by pivot column.
	std::vector<SparseVec> rref()
	{
		to_rref();
		std::vector<std::pair<std::size_t, std::size_t>> order;
		for (std::size_t k = 0; k < pivots_.size(); ++k)
			order.emplace_back(pivots_[k], k);
		std::sort(order.begin(), order.end());
		std::vector<SparseVec> out;
		for (auto &[col, k] : order)
			out.push_back(rows_[k]);
		return out;
	}

	/// Nullspace basis of the inserted rows: one vector per free column, with
	/// a 1 in that column (ascending free-column order).
	std::vector<SparseVec> nullspace()
	{
		to_rref();
		std::vector<char> is_pivot(columns_, 0);
		for (std::size_t c : pivots_)
			is_pivot[c] = 1;
		// column -> list of (pivot column, entry) over all pivot rows containing it
		std::map<std::size_t, std::vector<std::pair<std::size_t, Scalar>>> by_col;
		for (std::size_t k = 0; k < rows_.size(); ++k)
			for (std::size_t e = 1; e < rows_[k].size(); ++e)
				by_col[rows_[k][e].first].emplace_back(pivots_[k], rows_[k][e].second);
		std::vector<SparseVec> basis;
		for (std::size_t f = 0; f < columns_; ++f)
		{
			if (is_pivot[f])
				continue;
			std::map<std::size_t, Scalar> v;
			v[f] = Scalar(1);
			if (auto it = by_col.find(f); it != by_col.end())
				for (auto &[pc, x] : it->second)
					v[pc] = -x;
			basis.push_back(to_sparse(v));
		}
		return basis;
	}

private:
	void reduce(std::map<std::size_t, Scalar> &work) const
	{
		auto it = work.begin();
		while (it != work.end())
		{
			auto p = pivot_of_.find(it->first);
			if (p == pivot_of_.end())
			{
				++it;
				continue;
			}
			Scalar factor = it->second;
			std::size_t col = it->first;
			for (auto &[c, x] : rows_[p->second])
			{
				auto [w, inserted] = work.try_emplace(c, Scalar());
				w->second -= factor * x;
				if (w->second.is_zero() && c != col)
					work.erase(w);
			}
			it = work.erase(work.find(col));
			// entries of the pivot row lie at columns > col, so continuing forward is enough
			it = work.upper_bound(col);
		}
	}

	void to_rref()
	{
		if (reduced_)
			return;
		// eliminate each pivot column from every other row, highest pivot first
		std::vector<std::size_t> order(pivots_.size());
		for (std::size_t k = 0; k < order.size(); ++k)
			order[k] = k;
		std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pivots_[a] > pivots_[b]; });
		for (std::size_t k : order)
		{
			std::size_t col = pivots_[k];
			for (std::size_t r = 0; r < rows_.size(); ++r)
			{
				if (r == k || pivots_[r] > col)
					continue;
				auto hit = std::lower_bound(rows_[r].begin(), rows_[r].end(), col,
				                            [](auto &e, std::size_t c) { return e.first < c; });
				if (hit == rows_[r].end() || hit->first != col)
					continue;
				Scalar factor = hit->second;
				std::map<std::size_t, Scalar> work(rows_[r].begin(), rows_[r].end());
				for (auto &[c, x] : rows_[k])
					work[c] -= factor * x;
				rows_[r] = to_sparse(work);
			}
		}
		reduced_ = true;
	}

	std::size_t columns_;
	std::vector<SparseVec> rows_;
	std::vector<std::size_t> pivots_;
	std::map<std::size_t, std::size_t> pivot_of_;
	bool reduced_ = true;
};

/// Rank of a set of sparse vectors.
inline std::size_t rank_of(const std::vector<SparseVec> &vectors, std::size_t columns)
{
	Echelon e(columns);
	for (auto &v : vectors)
		e.insert(v);
	return e.rank();
}

} // namespace witt
