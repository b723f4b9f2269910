"""
dncbeta 模块入口文件

提供简单的演示功能，展示 DIV1 / DIV2 的基本用法。

用法:
    uv run python main.py
"""

from dncbeta import (
    DistParams,
    ErrorControls,
    compare,
    compare_lines,
    div1_cdf,
    div2_cdf,
    f_cdf,
)


def main():
    """主函数 - 演示 CDF 计算与误差对照"""
    print("=" * 50)
    print("双非中心 Beta 分布 CDF 演示")
    print("=" * 50)

    params = DistParams.from_degrees(n1=5, n2=7, lambda1=6.25, lambda2=0.25, x=0.3)

    # 1. DIV1 按行截断
    print("\n1. DIV1 按行截断:")
    report = div1_cdf(params)
    print(f"   P = {report.p_hat:.10f}")
    print(f"   U = {report.upper_bound:.3e}, CL = {report.control_line:.3e}")
    print(f"   行数 j1 = {report.boundary}, 计算项数 = {report.item_count}")

    # 2. DIV2 按列截断
    print("\n2. DIV2 按列截断:")
    report = div2_cdf(params)
    print(f"   P = {report.p_hat:.10f}")
    print(f"   列数 l1 = {report.boundary}, 每列项数 = {report.trunc_counts}")

    # 3. 收紧误差控制
    print("\n3. 收紧误差控制:")
    tight = div1_cdf(params, ErrorControls(eps_line=1e-10, eps_tail=1e-8))
    print(f"   P = {tight.p_hat:.12f}, U = {tight.upper_bound:.3e}")

    # 4. 与直接计算对照
    print("\n4. 与直接计算对照:")
    for method in ("div1", "div2"):
        result = compare(params, method=method)
        print(
            f"   {result.method.value}: 误差 = {result.error:.3e}, "
            f"误差链成立 = {result.bound_respected}"
        )

    # 5. 逐行诊断
    print("\n5. 逐行诊断（前 4 行）:")
    for line in compare_lines(params)[:4]:
        print(
            f"   j={line.index}: 项数={line.trunc_count}, "
            f"误差={line.error:.3e}, 上界={line.residual_bound:.3e}"
        )

    # 6. F 分布
    print("\n6. 双非中心 F 分布:")
    report = f_cdf(10, 20, 4, 9, 1.5)
    print(f"   P(F ≤ 1.5) = {report.p_hat:.10f}")

    print("\n" + "=" * 50)
    print("演示完成!")
    print("=" * 50)
    print("\n提示: 使用 'dncbeta --help' 查看命令行用法")


if __name__ == "__main__":
    main()
